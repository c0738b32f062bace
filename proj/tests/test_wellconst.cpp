#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <viscowave/wellconst.hpp>

#include "oracles.hpp"

using namespace viscowave;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("p = 1 gives the discrete Poincare constant") {
  double previous = 0.0;
  for (int n : {50, 100, 200, 400}) {
    const auto g = SpatialGrid::line(pi, n);
    const double h = g.h(0);
    const double lambda = 4.0 / (h * h) * std::pow(std::sin(h / 2.0), 2);
    const auto res = sobolev_gamma(g, 1.0);
    CHECK(res.gamma == Approx(1.0 / std::sqrt(lambda)).epsilon(1e-10));
    if (previous > 0.0) {
      // The discrete eigenvalue increases towards 1 under refinement, so gamma decreases.
      CHECK(res.gamma <= previous);
    }
    previous = res.gamma;
  }
  CHECK(std::abs(previous - 1.0) <= 1e-3);
}

TEST_CASE("p = 3 agrees with random-restart ascent") {
  const auto res = sobolev_gamma(SpatialGrid::line(1.0, 100), 3.0);
  const double oracle = oracle::sobolev_ratio_ascent(100, 1.0, 3.0, 20, 1234);
  CHECK(res.gamma == Approx(oracle).epsilon(1e-4));
  CHECK(res.gamma >= oracle * (1.0 - 1e-9));
}

TEST_CASE("refinement direction for p = 3") {
  double previous = 0.0;
  for (int n : {50, 100, 200, 400}) {
    const double gamma = sobolev_gamma(SpatialGrid::line(pi, n), 3.0).gamma;
    if (previous > 0.0) CHECK(gamma <= previous);
    previous = gamma;
  }
}

TEST_CASE("successive grids agree within 1e-4") {
  for (double p : {1.0, 3.0}) {
    double previous = 0.0;
    for (int n : {50, 100, 200, 400}) {
      const double gamma = sobolev_gamma(SpatialGrid::line(pi, n), p).gamma;
      if (previous > 0.0) {
        INFO("p = ", p, ", n = ", n);
        CHECK(std::abs(previous - gamma) <= 1e-4);
      }
      previous = gamma;
    }
  }
}

TEST_CASE("ground state and scale invariance") {
  const auto g = SpatialGrid::line(pi, 200);
  const double p = 3.0;
  const auto res = sobolev_gamma(g, p);
  CHECK(res.iterations > 0);
  CHECK(h1_seminorm_sq(res.ground_state) == Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < res.ground_state.size(); ++i) CHECK(res.ground_state[i] > 0.0);
  auto ratio = [&](const Field& u) {
    return std::pow(lp_norm_pow(u, p + 1), 1.0 / (p + 1)) / std::sqrt(h1_seminorm_sq(u));
  };
  CHECK(ratio(res.ground_state) == Approx(res.gamma).epsilon(1e-10));
  CHECK(ratio(2.0 * res.ground_state) == Approx(ratio(res.ground_state)).epsilon(1e-14));
}

TEST_CASE("Sobolev inequality on random fields") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> modes(1, 12);
  for (double p : {2.0, 3.0}) {
    const auto g = SpatialGrid::line(pi, 100);
    const double gamma = sobolev_gamma(g, p).gamma;
    for (int trial = 0; trial < 1000; ++trial) {
      Field u(g);
      if (trial % 2 == 0) {
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = nd(rng);
      } else {
        const int K = modes(rng);
        for (int k = 1; k <= K; ++k) {
          const double c = nd(rng) / k;
          for (std::size_t i = 0; i < u.size(); ++i) u[i] += c * std::sin(k * g.coordinate(0, static_cast<int>(i)));
        }
      }
      const double lhs = std::pow(lp_norm_pow(u, p + 1), 1.0 / (p + 1));
      CHECK(lhs <= gamma * std::sqrt(h1_seminorm_sq(u)) * (1.0 + 1e-8));
    }
  }
}

TEST_CASE("mountain-pass level and thresholds") {
  CHECK(mountain_pass_d(1.0, 3.0) == Approx(0.25));
  CHECK(mountain_pass_d(2.0, 2.0) == Approx(1.0 / 384.0).epsilon(1e-14));
  CHECK(mountain_pass_d(0.7, 3.0) == Approx(std::pow(0.7, -4.0) / 4.0).epsilon(1e-14));

  const double d = 0.5;
  const auto t3 = thresholds(d, 3.0, 2.0);
  CHECK(t3.y0 == 2.0 * d);
  REQUIRE(t3.M.has_value());
  const double closed = (std::sqrt(2.0) + 1.0) / 2.0 * (3.0 - std::sqrt(2.0)) / 2.0 * d;
  CHECK(*t3.M == Approx(closed).epsilon(1e-14));
  CHECK(*t3.M / d == Approx(0.957107).epsilon(1e-6));
  CHECK(*t3.M < d);

  const auto low = thresholds(d, 1.2, 2.0);
  CHECK_FALSE(low.M.has_value());
  CHECK_FALSE(low.M_absent_reason.empty());

  const auto wc = compute_well_constants(SpatialGrid::line(pi, 200), 3.0, 2.0);
  CHECK(wc.d == mountain_pass_d(wc.gamma, 3.0));
  CHECK(wc.y0 == 2.0 * wc.d);
  REQUIRE(wc.M.has_value());
  CHECK(*wc.M < wc.d);
}
