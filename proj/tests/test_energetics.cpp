#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include <viscowave/energetics.hpp>
#include <viscowave/error.hpp>
#include <viscowave/simulation.hpp>

using namespace viscowave;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {

Field sine(const SpatialGrid& g, double amplitude = 1.0) {
  const std::array<int, 1> mode{1};
  return Field::sine_mode(g, mode, amplitude);
}

ScenarioConfig small_scenario(double amplitude, double t_end) {
  ScenarioConfig c;
  c.grid = "1d:pi:50";
  c.history.mode = ExtensionMode::Frozen;
  c.history.amplitude = amplitude;
  c.t_end = t_end;
  return c;
}

Trajectory run_with_frames(const ScenarioConfig& c) {
  return *simulate(c, {true}).trajectory;
}

}  // namespace

TEST_CASE("energies of simple states") {
  const auto g = SpatialGrid::line(pi, 100);
  Dynamics dyn{RelaxationKernel::exponential(1.0, 1.0), 1.0, 3.0, {}};

  const SimState zero = make_initial_state(HistoryDatum::constant(Field(g)), dyn, 0.01);
  CHECK(quadratic_energy(zero) == 0.0);
  CHECK(total_energy(zero, 3.0) == 0.0);

  const Field U = sine(g, 0.4);
  const SimState still = make_initial_state(HistoryDatum::constant(U), dyn, 0.01);
  CHECK(quadratic_energy(still) == Approx(0.5 * h1_seminorm_sq(U)).epsilon(1e-14));
  CHECK(total_energy(still, 3.0) > 0.0);

  // u = U from t = 0 on, zero before: the memory term adds ||grad U||^2 * tail_mass(0).
  const double ds = 1e-3;
  const HistoryDatum jump({U, Field(g)}, ds, ExtensionMode::Zero, Field(g));
  const SimState on = make_initial_state(jump, dyn, ds);
  CHECK(quadratic_energy(on) == Approx(h1_seminorm_sq(U)).epsilon(ds));

  const SimState big = make_initial_state(HistoryDatum::constant(sine(g, 5.0)), dyn, 0.01);
  CHECK(total_energy(big, 3.0) < 0.0);
}

TEST_CASE("dissipation increments") {
  const auto g = SpatialGrid::line(pi, 40);
  Dynamics dyn{RelaxationKernel::exponential(1.0, 1.0), 1.0, 3.0, {}};
  const SimState zero = make_initial_state(HistoryDatum::constant(Field(g)), dyn, 0.01);
  const auto none = dissipation_increment(zero, zero, dyn);
  CHECK(none.damp == 0.0);
  CHECK(none.visc == 0.0);

  const Field V = sine(g, 0.3);
  SimState moving = make_initial_state(HistoryDatum::constant(Field(g)), dyn, 0.01);
  moving.v = V;
  const auto rates = dissipation_rates(moving, dyn);
  CHECK(rates.damp == Approx(l2_norm_sq(V)).epsilon(1e-14));
  CHECK(rates.visc == 0.0);  // w = 0
  const auto inc = dissipation_increment(rates, rates, 0.25);
  CHECK(inc.damp == Approx(0.25 * l2_norm_sq(V)).epsilon(1e-14));
}

TEST_CASE("zero run has vanishing residuals") {
  ScenarioConfig c = small_scenario(0.0, 2.0);
  const auto out = simulate(c);
  for (const auto& row : out.ledger.rows) {
    CHECK(row.identity_residual == 0.0);
    CHECK(row.E == 0.0);
  }
  CHECK(monotonicity_check(out.ledger).ok);
  CHECK(sandwich_check(out.ledger, 3.0).ok);
  CHECK(nehari_positive_check(out.ledger).ok);
}

TEST_CASE("pure dissipation decreases energy strictly") {
  ScenarioConfig c = small_scenario(0.5, 10.0);
  c.switches.source = false;
  const auto out = simulate(c);
  const auto& rows = out.ledger.rows;
  REQUIRE(rows.size() > 10);
  for (std::size_t j = 1; j < rows.size(); ++j) CHECK(rows[j].E < rows[j - 1].E);
  for (std::size_t j = 1; j < rows.size(); ++j) {
    CHECK(rows[j].damp_cum >= rows[j - 1].damp_cum);
    CHECK(rows[j].visc_cum >= rows[j - 1].visc_cum);
    CHECK(rows[j].D_cum == Approx(rows[j].damp_cum + rows[j].visc_cum).epsilon(1e-15));
  }
}

TEST_CASE("well-side run keeps the sandwich and a positive gap") {
  ScenarioConfig c = small_scenario(0.5, 20.0);
  const auto out = simulate(c);
  CHECK(sandwich_check(out.ledger, c.p).ok);
  CHECK(nehari_positive_check(out.ledger).ok);
  CHECK(monotonicity_check(out.ledger).ok);
  for (const auto& row : out.ledger.rows) {
    CHECK(row.identity_residual == Approx(std::abs(row.E + row.D_cum - out.ledger.E0())).epsilon(1e-12).scale(1e-16));
  }
}

TEST_CASE("checks flag injected violations") {
  EnergyLedger ledger;
  for (int j = 0; j < 5; ++j) {
    LedgerRow r;
    r.t = j;
    r.scriptE = 1.0 - 0.1 * j;
    r.E = 0.8 - 0.1 * j;
    r.nehari_gap = 0.5;
    ledger.rows.push_back(r);
  }
  CHECK(monotonicity_check(ledger).ok);
  CHECK(sandwich_check(ledger, 3.0).ok);
  ledger.rows[3].E = 0.9;
  const auto mono = monotonicity_check(ledger);
  CHECK_FALSE(mono.ok);
  REQUIRE(mono.violations.size() == 1);
  CHECK(mono.violations[0].row == 3);
  CHECK_FALSE(sandwich_check(ledger, 3.0).ok);  // E > scriptE
  ledger.rows[2].nehari_gap = -1e-3;
  CHECK_FALSE(nehari_positive_check(ledger).ok);
}

TEST_CASE("ledger CSV round trip") {
  const auto out = simulate(small_scenario(0.5, 1.0));
  const std::string csv = out.ledger.to_csv();
  CHECK(csv.rfind("t,scriptE,E,I,D_cum,damp_cum,visc_cum,grad_norm,lp_pow,nehari_gap,identity_residual\n", 0) == 0);
  CHECK(EnergyLedger::from_csv(csv) == out.ledger);
  CHECK_THROWS_AS(EnergyLedger::from_csv("t,E\n0,1\n"), ValidationError);
}

TEST_CASE("weak-form residual") {
  const auto g = SpatialGrid::parse("1d:pi:50");
  const TestFunction smooth{sine(g), TestProfile::Cosine, 0.7};
  const TestFunction nothing{Field(g), TestProfile::Linear, 1.0};

  CHECK(variational_residual(run_with_frames(small_scenario(0.0, 2.0)), smooth) == 0.0);
  const Trajectory tr = run_with_frames(small_scenario(0.5, 2.0));
  CHECK(variational_residual(tr, nothing) == 0.0);

  ScenarioConfig coarse = small_scenario(0.5, 2.0);
  coarse.dt = 0.02;
  ScenarioConfig fine = coarse;
  fine.dt = 0.01;
  const double r1 = variational_residual(run_with_frames(coarse), smooth);
  const double r2 = variational_residual(run_with_frames(fine), smooth);
  CHECK(r1 > 0.0);
  CHECK(r1 / r2 >= 2.0);
}
