#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <viscowave/energetics.hpp>
#include <viscowave/error.hpp>
#include <viscowave/integrator.hpp>

using namespace viscowave;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {

Field sine(const SpatialGrid& g, double amplitude = 1.0) {
  const std::array<int, 1> mode{1};
  return Field::sine_mode(g, mode, amplitude);
}

// Runs a linear damped oscillation with memory and source off; returns the midpoint value per step.
std::vector<double> damped_mode(const SpatialGrid& g, double dt, double t_end) {
  Dynamics dyn{RelaxationKernel::exponential(1.0, 1.0), 1.0, 3.0, {true, false, false}};
  SimState s = make_initial_state(HistoryDatum::constant(sine(g)), dyn, dt);
  const auto steps = static_cast<long>(std::llround(t_end / dt));
  const std::size_t mid = g.size() / 2;
  std::vector<double> trace{s.u[mid]};
  for (long j = 0; j < steps; ++j) {
    step(s, dyn);
    trace.push_back(s.u[mid]);
  }
  return trace;
}

}  // namespace

TEST_CASE("pointwise damping solve") {
  CHECK(pointwise_damping_solve(1.0, 1.0, 1.0) == Approx(0.5));
  CHECK(pointwise_damping_solve(2.0, 1.0, 3.0) == Approx(1.0).epsilon(1e-14));
  CHECK(pointwise_damping_solve(-2.0, 1.0, 3.0) == Approx(-1.0).epsilon(1e-14));
  for (double m : {1.0, 1.5, 3.0}) CHECK(pointwise_damping_solve(0.0, 0.3, m) == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a(-50.0, 50.0), dt(1e-4, 2.0), m(1.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const double av = a(rng), dv = dt(rng), mv = m(rng);
    const double v = pointwise_damping_solve(av, dv, mv);
    CHECK(v + dv * std::pow(std::abs(v), mv - 1.0) * v == Approx(av).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(v) <= std::abs(av));
  }
  CHECK_THROWS_AS(pointwise_damping_solve(1.0, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(pointwise_damping_solve(1.0, 0.1, 0.5), ValidationError);
}

TEST_CASE("stability bound") {
  const auto g = SpatialGrid::line(pi, 200);
  CHECK(stability_bound(g, 2.0, 0.5) == Approx(0.5 * g.h(0) / std::sqrt(2.0)));
  const auto r = SpatialGrid::rectangle(1.0, 1.0, 9, 9);
  CHECK(stability_bound(r, 1.0, 1.0) == Approx(0.1 / std::sqrt(2.0)));
}

TEST_CASE("zero state is an equilibrium") {
  const auto g = SpatialGrid::line(pi, 30);
  Dynamics dyn{RelaxationKernel::polynomial(1.0, 1.5), 2.0, 3.0, {}};
  SimState s = make_initial_state(HistoryDatum::constant(Field(g)), dyn, 0.01);
  for (int j = 0; j < 200; ++j) step(s, dyn);
  CHECK(s.u.is_zero());
  CHECK(s.v.is_zero());
  CHECK(s.t == Approx(2.0));
  CHECK(s.step_index == 200);
}

TEST_CASE("damped single mode against a fine-step reference and linear theory") {
  const auto g = SpatialGrid::line(pi, 50);
  const double dt = 0.5 * g.h(0);
  const double t_end = 20.0;
  const auto coarse = damped_mode(g, dt, t_end);
  const auto fine = damped_mode(g, dt / 100.0, t_end);
  double worst = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) worst = std::max(worst, std::abs(coarse[j] - fine[100 * j]));
  CHECK(worst <= 1e-3);

  // The mode obeys u'' + u' + lambda_h u = 0; measure the period from zero crossings.
  const double h = g.h(0);
  const double lambda = 4.0 / (h * h) * std::pow(std::sin(h / 2), 2);
  const double omega = std::sqrt(lambda - 0.25);
  std::vector<double> crossings;
  const double fdt = dt / 100.0;
  for (std::size_t j = 1; j < fine.size(); ++j) {
    if ((fine[j - 1] > 0.0) != (fine[j] > 0.0)) {
      crossings.push_back(fdt * (j - 1 + fine[j - 1] / (fine[j - 1] - fine[j])));
    }
  }
  REQUIRE(crossings.size() >= 4);
  const double period = 2.0 * (crossings.back() - crossings.front()) / (crossings.size() - 1);
  CHECK(period == Approx(2.0 * pi / omega).epsilon(0.01));
  CHECK(std::abs(fine.back()) < std::abs(fine.front()));
}

TEST_CASE("identity residual is second order in (dt, h)") {
  std::vector<double> residuals;
  for (int n : {50, 101, 203}) {
    const auto g = SpatialGrid::line(pi, n);
    Dynamics dyn{RelaxationKernel::exponential(1.0, 1.0), 1.0, 3.0, {}};
    const double dt = stability_bound(g, 2.0, 0.5);
    SimState s = make_initial_state(HistoryDatum::constant(sine(g, 0.5)), dyn, dt);
    const double E0 = make_row(s, dyn, 0.0, 0.0, 0.0).E;
    DissipationRates rates = dissipation_rates(s, dyn);
    double damp = 0.0, visc = 0.0;
    const auto steps = static_cast<long>(std::ceil(5.0 / dt));
    for (long j = 0; j < steps; ++j) {
      step(s, dyn);
      const auto next = dissipation_rates(s, dyn);
      const auto inc = dissipation_increment(rates, next, dt);
      damp += inc.damp;
      visc += inc.visc;
      rates = next;
    }
    residuals.push_back(make_row(s, dyn, damp, visc, E0).identity_residual);
  }
  CHECK(residuals[0] / residuals[1] >= 3.0);
  CHECK(residuals[1] / residuals[2] >= 3.0);
}

TEST_CASE("non-finite state is reported") {
  const auto g = SpatialGrid::line(pi, 20);
  Dynamics dyn{RelaxationKernel::exponential(1.0, 1.0), 1.0, 3.0, {}};
  SimState s = make_initial_state(HistoryDatum::constant(sine(g, 1e200)), dyn, 0.01);
  CHECK_THROWS_AS(step(s, dyn), BlowupOrInstability);
  CHECK_THROWS_AS(make_initial_state(HistoryDatum::constant(sine(g)), dyn, 0.0), ValidationError);
}
