#include <doctest.h>

#include <cmath>
#include <random>

#include <viscowave/decay.hpp>
#include <viscowave/error.hpp>

using namespace viscowave;
using doctest::Approx;

namespace {

EnergyLedger synthetic(double t_end, int rows, double (*E)(double)) {
  EnergyLedger l;
  for (int j = 0; j <= rows; ++j) {
    LedgerRow r;
    r.t = t_end * j / rows;
    r.E = E(r.t);
    l.rows.push_back(r);
  }
  return l;
}

// Explicit Euler for S' = -(I + Phi)^{-1} S with Phi(s) = C (sqrt(s) + s) (m = 3);
// z + C(sqrt z + z) = S is a quadratic in sqrt z.
double euler_m3(double C, double S0, double t_end, double h) {
  double S = S0;
  const auto steps = static_cast<long>(std::llround(t_end / h));
  for (long j = 0; j < steps; ++j) {
    const double x = (-C + std::sqrt(C * C + 4.0 * (1.0 + C) * S)) / (2.0 * (1.0 + C));
    S -= h * x * x;
  }
  return S;
}

}  // namespace

TEST_CASE("rate fits on synthetic ledgers") {
  const auto e = fit_rate(synthetic(10.0, 200, [](double t) { return std::exp(-2.0 * t); }), 5.0, 10.0,
                          RateModel::Exponential);
  CHECK(e.rate == Approx(2.0).epsilon(1e-12));
  CHECK(e.goodness == Approx(1.0).epsilon(1e-12));
  const auto p = fit_rate(synthetic(100.0, 400, [](double t) { return 1.0 / (1.0 + t); }), 50.0, 100.0,
                          RateModel::Polynomial);
  CHECK(p.rate == Approx(1.0).epsilon(1e-12));
  CHECK(p.goodness == Approx(1.0).epsilon(1e-12));
  const auto c = fit_rate(synthetic(10.0, 100, [](double) { return 0.3; }), 5.0, 10.0, RateModel::Exponential);
  CHECK(std::abs(c.rate) < 1e-12);
  CHECK_THROWS_AS(fit_rate(synthetic(10.0, 4, [](double t) { return std::exp(-t); }), 0.0, 10.0,
                           RateModel::Exponential),
                  ValidationError);
}

TEST_CASE("predicted rates by case") {
  const auto c1 = predicted_rate(1.0, KernelFamily::Exponential, std::nullopt, std::nullopt, false);
  CHECK(c1.decay_case == 1);
  CHECK(c1.kind == RateModel::Exponential);
  const auto c2 = predicted_rate(3.0, KernelFamily::Exponential, std::nullopt, std::nullopt, false);
  CHECK(c2.decay_case == 2);
  CHECK(c2.exponent == Approx(1.0));
  const auto c4 = predicted_rate(3.0, KernelFamily::Polynomial, 1.5, std::nullopt, true);
  CHECK(c4.decay_case == 4);
  CHECK(c4.exponent == Approx(2.0));
  const auto c3 = predicted_rate(1.0, KernelFamily::Polynomial, 1.5, std::nullopt, true);
  CHECK(c3.decay_case == 3);
  CHECK(c3.exponent == Approx(2.0));
}

TEST_CASE("comparison functions are increasing from zero") {
  DecayModel model;
  model.m = 3.0;
  model.r = 1.5;
  model.sigma = 0.3;
  CHECK(model.Phi(0.0) == 0.0);
  CHECK(model.Psi(0.0) == 0.0);
  double prev_phi = 0.0, prev_psi = 0.0;
  for (double s = 1e-6; s < 1e3; s *= 1.7) {
    CHECK(model.Phi(s) > prev_phi);
    CHECK(model.Psi(s) > prev_psi);
    prev_phi = model.Phi(s);
    prev_psi = model.Psi(s);
  }
}

TEST_CASE("comparison ODE") {
  DecayModel linear;
  linear.m = 1.0;
  linear.phi_C = 0.5;  // Phi(s) = s
  const auto sol = lt_ode_solve(linear, 2.0, 10.0);
  for (std::size_t k = 0; k < sol.t.size(); ++k) CHECK(sol.S[k] == Approx(2.0 * std::exp(-sol.t[k] / 2)).epsilon(1e-6));
  for (std::size_t k = 1; k < sol.S.size(); ++k) {
    CHECK(sol.S[k] < sol.S[k - 1]);
    CHECK(sol.S[k] > 0.0);
  }

  const auto zero = lt_ode_solve(linear, 0.0, 5.0);
  for (double s : zero.S) CHECK(s == 0.0);

  DecayModel cubic;
  cubic.m = 3.0;
  cubic.phi_C = 1.0;
  const auto sol3 = lt_ode_solve(cubic, 1.0, 100.0);
  double envelope = 0.0;
  for (std::size_t k = 0; k < sol3.t.size(); ++k) envelope = std::max(envelope, sol3.S[k] * (1.0 + sol3.t[k]));
  CHECK(envelope <= 10.0);
  for (double t : {1.0, 10.0, 100.0}) CHECK(sol3.at(t) == Approx(euler_m3(1.0, 1.0, t, 1e-5)).epsilon(1e-4));
  CHECK(sol3.max_inverse_residual <= 1e-12);
}

TEST_CASE("inverse identity on random points") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ls(std::log(1e-6), std::log(1e3));
  for (int i = 0; i < 1000; ++i) {
    DecayModel model;
    model.m = 1.0 + (i % 5);
    model.phi_C = 0.3 + 0.1 * (i % 7);
    const Comparison which = i % 3 == 0 ? Comparison::Psi : Comparison::Phi;
    if (which == Comparison::Psi) {
      model.r = 1.25;
      model.sigma = 0.1;
    }
    const double s = std::exp(ls(rng));
    const double lhs = inverse_identity_plus_inverse(model, which, s);
    const double rhs = s - inverse_identity_plus(model, which, s);
    CHECK(lhs == Approx(rhs).epsilon(1e-10));
    const double z = inverse_identity_plus(model, which, s);
    CHECK(z + model.apply(which, z) == Approx(s).epsilon(1e-13));
    CHECK(model.apply(which, inverse_comparison(model, which, s)) == Approx(s).epsilon(1e-13));
  }
}

TEST_CASE("comparison check on constructed ledgers") {
  DecayModel truth;
  truth.m = 3.0;
  truth.phi_C = 0.7;
  const auto sol = lt_ode_solve(truth, 1.0, 10.0);
  EnergyLedger ledger;
  for (std::size_t k = 0; k < sol.t.size(); ++k) {
    LedgerRow r;
    r.t = sol.t[k];
    r.E = sol.S[k];
    ledger.rows.push_back(r);
  }
  DecayModel probe;
  probe.m = 3.0;
  const auto rep = comparison_check(ledger, probe);
  CHECK(rep.ok);
  CHECK(rep.calibrated_C == Approx(0.7).epsilon(1e-4));

  EnergyLedger flat;
  for (int j = 0; j <= 50; ++j) flat.rows.push_back(LedgerRow{static_cast<double>(j) * 0.1});
  CHECK(comparison_check(flat, probe).ok);

  CHECK(compare_samples({1.0, 0.5, 0.2}, {1.0, 0.5, 0.2}, 0.0).ok);
  CHECK_FALSE(compare_samples({1.0, 0.6}, {1.0, 0.5}, 1e-6).ok);
}

TEST_CASE("bootstrap iterations") {
  const auto a = optimal_rate_bootstrap(0.2, 1.5);
  CHECK(a.iterations == 2);
  REQUIRE(a.sigma_sequence.size() == 3);
  CHECK(a.sigma_sequence[1] == Approx(0.45));
  CHECK(a.sigma_sequence[2] == Approx(0.7));
  CHECK(optimal_rate_bootstrap(0.05, 1.9).iterations == 17);
  CHECK(optimal_rate_bootstrap(0.6, 1.5).iterations == 0);

  for (double r = 1.05; r < 1.96; r += 0.05) {
    for (double s1 = 0.01; s1 < 0.99; s1 += 0.07) {
      const auto b = optimal_rate_bootstrap(s1, r);
      const int bound = static_cast<int>(std::ceil((r - 1.0) / ((2.0 - r) / 2.0))) + 1;
      CHECK(b.iterations <= bound);
      CHECK(b.sigma_sequence.back() >= r - 1.0 - 1e-12);
    }
  }
  CHECK_THROWS_AS(optimal_rate_bootstrap(1.5, 1.5), ValidationError);
}
