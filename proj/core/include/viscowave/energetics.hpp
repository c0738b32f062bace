#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "viscowave/history.hpp"
#include "viscowave/integrator.hpp"

namespace viscowave {

/// One diagnostic row; column order matches kLedgerColumns.
struct LedgerRow {
  double t = 0.0;
  double scriptE = 0.0;  ///< quadratic energy
  double E = 0.0;        ///< total energy
  double I = 0.0;        ///< potential energy E - ||u_t||^2 / 2
  double D_cum = 0.0;
  double damp_cum = 0.0;
  double visc_cum = 0.0;
  double grad_norm = 0.0;
  double lp_pow = 0.0;  ///< ||u||_{p+1}^{p+1}
  double nehari_gap = 0.0;
  double identity_residual = 0.0;

  bool operator==(const LedgerRow&) const = default;
};

inline constexpr std::array<const char*, 11> kLedgerColumns = {
    "t",        "scriptE",   "E",         "I",          "D_cum",            "damp_cum",
    "visc_cum", "grad_norm", "lp_pow",    "nehari_gap", "identity_residual"};

struct EnergyLedger {
  std::vector<LedgerRow> rows;

  [[nodiscard]] double E0() const { return rows.empty() ? 0.0 : rows.front().E; }
  /// CSV with a header row and 17 significant digits per value.
  [[nodiscard]] std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
  static EnergyLedger from_csv(const std::string& text);
  static EnergyLedger read_csv(const std::filesystem::path& path);

  bool operator==(const EnergyLedger&) const = default;
};

/// (||u_t||^2 + ||grad u||^2 + int ||grad w||^2 mu) / 2.
double quadratic_energy(const SimState& state);
/// quadratic_energy - ||u||_{p+1}^{p+1} / (p+1).
double total_energy(const SimState& state, double p);

/// Instantaneous dissipation rates: ||u_t||_{m+1}^{m+1} and -int ||grad w||^2 mu' / 2.
struct DissipationRates {
  double damp = 0.0;
  double visc = 0.0;
};
DissipationRates dissipation_rates(const SimState& state, const Dynamics& dynamics);

/// Trapezoid-in-time dissipation between two consecutive states.
DissipationRates dissipation_increment(const SimState& before, const SimState& after, const Dynamics& dynamics);
DissipationRates dissipation_increment(const DissipationRates& before, const DissipationRates& after, double dt);

LedgerRow make_row(const SimState& state, const Dynamics& dynamics, double damp_cum, double visc_cum, double E0);

/// |E + D_cum - E(0)|.
double identity_residual(const LedgerRow& row, double E0);

struct Violation {
  std::size_t row = 0;
  double t = 0.0;
  double excess = 0.0;
};

struct CheckReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/**
 * E(t_{j+1}) <= E(t_j) + tol_step with
 * tol_step = 1e-8 max(1, |E(0)|) + max(residual_j, residual_{j+1}).
 */
CheckReport monotonicity_check(const EnergyLedger& ledger);

/// 0 <= (p-1)/(p+1) scriptE <= E <= scriptE at every row, up to 1e-12 max(1, scriptE).
CheckReport sandwich_check(const EnergyLedger& ledger, double p);

/// nehari_gap > 0 at every row with a nonzero state.
CheckReport nehari_positive_check(const EnergyLedger& ledger);

// ---------------------------------------------------------------------------
// Weak-form residual

struct TrajectoryFrame {
  double t = 0.0;
  Field u;
  Field v;
};

struct Trajectory {
  HistoryDatum history;
  Dynamics dynamics;
  std::vector<TrajectoryFrame> frames;
};

enum class TestProfile { Constant, Linear, Cosine };

/// Separable test function phi(x, t) = psi(x) * theta(t).
struct TestFunction {
  Field psi;
  TestProfile profile = TestProfile::Constant;
  double omega = 1.0;  ///< slope for Linear, angular frequency for Cosine

  [[nodiscard]] double theta(double t) const;
  [[nodiscard]] double theta_dot(double t) const;
};

/**
 * Left minus right side of the variational identity at the last stored frame,
 * every time and memory integral taken by the trapezoid rule on the stored
 * frames and history samples. Returns the absolute value.
 */
double variational_residual(const Trajectory& trajectory, const TestFunction& test);

}  // namespace viscowave
