#include "viscowave/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "parse_util.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

namespace {

double& column(LedgerRow& row, std::size_t k) {
  double* cols[] = {&row.t,        &row.scriptE,  &row.E,      &row.I,          &row.D_cum,
                    &row.damp_cum, &row.visc_cum, &row.grad_norm, &row.lp_pow, &row.nehari_gap,
                    &row.identity_residual};
  return *cols[k];
}

double column(const LedgerRow& row, std::size_t k) { return column(const_cast<LedgerRow&>(row), k); }

}  // namespace

std::string EnergyLedger::to_csv() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < kLedgerColumns.size(); ++k) out << (k ? "," : "") << kLedgerColumns[k];
  out << '\n';
  for (const LedgerRow& row : rows) {
    for (std::size_t k = 0; k < kLedgerColumns.size(); ++k) {
      out << (k ? "," : "") << detail::format_real(column(row, k));
    }
    out << '\n';
  }
  return out.str();
}

void EnergyLedger::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write ledger '" + path.string() + "'");
  out << to_csv();
}

EnergyLedger EnergyLedger::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("ledger CSV is empty");
  const auto header = detail::split(detail::trim(line), ',');
  if (header.size() != kLedgerColumns.size()) throw ValidationError("ledger CSV header has wrong column count");
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] != kLedgerColumns[k]) {
      throw ValidationError("ledger CSV column " + std::to_string(k) + " should be '" + kLedgerColumns[k] + "'");
    }
  }
  EnergyLedger ledger;
  while (std::getline(in, line)) {
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto cells = detail::split(trimmed, ',');
    if (cells.size() != kLedgerColumns.size()) throw ValidationError("ledger CSV row has wrong column count");
    LedgerRow row;
    for (std::size_t k = 0; k < cells.size(); ++k) column(row, k) = detail::parse_real(cells[k]);
    ledger.rows.push_back(row);
  }
  return ledger;
}

EnergyLedger EnergyLedger::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open ledger '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str());
}

double quadratic_energy(const SimState& state) {
  return 0.5 * (l2_norm_sq(state.v) + h1_seminorm_sq(state.u) + state.memory_mu);
}

double total_energy(const SimState& state, double p) {
  return quadratic_energy(state) - lp_norm_pow(state.u, p + 1.0) / (p + 1.0);
}

DissipationRates dissipation_rates(const SimState& state, const Dynamics& dynamics) {
  DissipationRates r;
  if (dynamics.switches.damping) r.damp = lp_norm_pow(state.v, dynamics.m + 1.0);
  if (dynamics.switches.memory) r.visc = std::max(0.0, -0.5 * state.memory_mu_prime);
  return r;
}

DissipationRates dissipation_increment(const DissipationRates& before, const DissipationRates& after, double dt) {
  return {0.5 * dt * (before.damp + after.damp), 0.5 * dt * (before.visc + after.visc)};
}

DissipationRates dissipation_increment(const SimState& before, const SimState& after, const Dynamics& dynamics) {
  return dissipation_increment(dissipation_rates(before, dynamics), dissipation_rates(after, dynamics),
                               after.t - before.t);
}

LedgerRow make_row(const SimState& state, const Dynamics& dynamics, double damp_cum, double visc_cum, double E0) {
  LedgerRow row;
  const double p = dynamics.p;
  const double h1 = h1_seminorm_sq(state.u);
  const double kinetic = l2_norm_sq(state.v);
  row.t = state.t;
  row.lp_pow = lp_norm_pow(state.u, p + 1.0);
  row.scriptE = 0.5 * (kinetic + h1 + state.memory_mu);
  const double source = dynamics.switches.source ? row.lp_pow / (p + 1.0) : 0.0;
  row.E = row.scriptE - source;
  row.I = row.E - 0.5 * kinetic;
  row.damp_cum = damp_cum;
  row.visc_cum = visc_cum;
  row.D_cum = damp_cum + visc_cum;
  row.grad_norm = std::sqrt(h1);
  row.nehari_gap = h1 + state.memory_mu - row.lp_pow;
  row.identity_residual = identity_residual(row, E0);
  return row;
}

double identity_residual(const LedgerRow& row, double E0) { return std::abs(row.E + row.D_cum - E0); }

CheckReport monotonicity_check(const EnergyLedger& ledger) {
  CheckReport report;
  const double base = 1e-8 * std::max(1.0, std::abs(ledger.E0()));
  for (std::size_t j = 0; j + 1 < ledger.rows.size(); ++j) {
    const LedgerRow& a = ledger.rows[j];
    const LedgerRow& b = ledger.rows[j + 1];
    const double tol = base + std::max(a.identity_residual, b.identity_residual);
    const double excess = b.E - a.E - tol;
    if (excess > 0.0) report.violations.push_back({j + 1, b.t, excess});
  }
  report.ok = report.violations.empty();
  return report;
}

CheckReport sandwich_check(const EnergyLedger& ledger, double p) {
  CheckReport report;
  const double lower = (p - 1.0) / (p + 1.0);
  for (std::size_t j = 0; j < ledger.rows.size(); ++j) {
    const LedgerRow& r = ledger.rows[j];
    const double tol = 1e-12 * std::max(1.0, std::abs(r.scriptE));
    const double excess = std::max({-r.scriptE - tol, lower * r.scriptE - r.E - tol, r.E - r.scriptE - tol});
    if (excess > 0.0) report.violations.push_back({j, r.t, excess});
  }
  report.ok = report.violations.empty();
  return report;
}

CheckReport nehari_positive_check(const EnergyLedger& ledger) {
  CheckReport report;
  for (std::size_t j = 0; j < ledger.rows.size(); ++j) {
    const LedgerRow& r = ledger.rows[j];
    if (r.scriptE == 0.0) continue;
    if (!(r.nehari_gap > 0.0)) report.violations.push_back({j, r.t, -r.nehari_gap});
  }
  report.ok = report.violations.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Weak-form residual

double TestFunction::theta(double t) const {
  switch (profile) {
    case TestProfile::Constant:
      return 1.0;
    case TestProfile::Linear:
      return 1.0 + omega * t;
    case TestProfile::Cosine:
      return std::cos(omega * t);
  }
  return 0.0;
}

double TestFunction::theta_dot(double t) const {
  switch (profile) {
    case TestProfile::Constant:
      return 0.0;
    case TestProfile::Linear:
      return omega;
    case TestProfile::Cosine:
      return -omega * std::sin(omega * t);
  }
  return 0.0;
}

namespace {

// Trapezoid rule for samples y at increasing abscissae x.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) sum += 0.5 * (x[j + 1] - x[j]) * (y[j] + y[j + 1]);
  return sum;
}

}  // namespace

double variational_residual(const Trajectory& trajectory, const TestFunction& test) {
  const auto& frames = trajectory.frames;
  if (frames.empty()) return 0.0;
  const Dynamics& dyn = trajectory.dynamics;
  const RelaxationKernel& kernel = dyn.kernel;
  const Field& psi = test.psi;
  require_same_grid(psi, frames.front().u);

  const std::size_t n = frames.size();
  std::vector<double> times(n), a(n), kinetic(n), damping(n), source(n), memory(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& f = frames[j];
    times[j] = f.t;
    a[j] = h1_inner(f.u, psi);
    kinetic[j] = l2_inner(f.v, psi) * test.theta_dot(f.t);
    if (dyn.switches.damping) {
      Field g(f.v.grid());
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::abs(f.v[i]), dyn.m - 1.0) * f.v[i];
      damping[j] = l2_inner(g, psi) * test.theta(f.t);
    }
    if (dyn.switches.source) {
      Field g(f.u.grid());
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::abs(f.u[i]), dyn.p - 1.0) * f.u[i];
      source[j] = l2_inner(g, psi) * test.theta(f.t);
    }
  }

  double k0 = 1.0;
  if (dyn.switches.memory) {
    k0 = kernel.k0();
    const HistoryDatum& hist = trajectory.history;
    const auto& samples = hist.samples();
    std::vector<double> b(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) b[k] = h1_inner(samples[k], psi);
    const double b_ext = h1_inner(hist.extension(), psi);
    const double ds = hist.spacing();
    const double T0 = hist.support_T0();

    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = times[i];
      // Part of the past lying inside [0, tau]: nodes at the stored frames.
      x.assign(times.begin(), times.begin() + static_cast<long>(i) + 1);
      y.resize(i + 1);
      for (std::size_t j = 0; j <= i; ++j) y[j] = kernel.mu(tau - times[j]) * a[j];
      double conv = trapezoid(x, y);
      // Part reaching into the history datum, then its extension.
      if (samples.size() > 1) {
        x.resize(samples.size());
        y.resize(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) {
          x[k] = static_cast<double>(k) * ds;
          y[k] = kernel.mu(tau + x[k]) * b[k];
        }
        conv += trapezoid(x, y);
      }
      conv += kernel.tail_mass(tau + T0) * b_ext;
      memory[i] = -conv * test.theta(tau);
    }
  }

  std::vector<double> elastic(n);
  for (std::size_t j = 0; j < n; ++j) elastic[j] = k0 * a[j] * test.theta(times[j]);

  const auto& first = frames.front();
  const auto& last = frames.back();
  const double boundary =
      l2_inner(last.v, psi) * test.theta(last.t) - l2_inner(first.v, psi) * test.theta(first.t);
  const double lhs = boundary - trapezoid(times, kinetic) + trapezoid(times, elastic) + trapezoid(times, memory) +
                     trapezoid(times, damping);
  return std::abs(lhs - trapezoid(times, source));
}

}  // namespace viscowave
