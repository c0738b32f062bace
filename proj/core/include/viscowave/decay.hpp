#pragma once

#include <optional>
#include <string>
#include <vector>

#include "viscowave/energetics.hpp"
#include "viscowave/kernel.hpp"

namespace viscowave {

enum class RateModel { Exponential, Polynomial };

const char* to_string(RateModel model);

struct RateFit {
  double rate = 0.0;      ///< alpha in e^{-alpha t}, or exponent q in (1+t)^{-q}
  double goodness = 0.0;  ///< coefficient of determination of the log-linear fit
  std::size_t rows_used = 0;
};

/// Least-squares fit of ln E against t (exponential) or ln(1+t) (polynomial) over [t_lo, t_hi].
RateFit fit_rate(const EnergyLedger& ledger, double t_lo, double t_hi, RateModel model);

struct RatePrediction {
  int decay_case = 0;  ///< 1..4
  RateModel kind = RateModel::Exponential;
  double exponent = 0.0;  ///< polynomial exponent, 0 for exponential decay
};

/// Upper-bound decay rate for damping exponent m and the kernel's decay class.
RatePrediction predicted_rate(double m, KernelFamily family, std::optional<double> r, std::optional<double> sigma,
                              bool compact_support);

enum class Comparison { Phi, Psi };

/// Comparison functions of the reiteration argument.
struct DecayModel {
  double phi_C = 1.0;
  double psi_C1 = 1.0;
  double psi_C2 = 1.0;
  double m = 1.0;
  std::optional<double> r;
  std::optional<double> sigma;
  double T_reiter = 1.0;

  /// phi_C (s^{2/(m+1)} + s)
  [[nodiscard]] double Phi(double s) const;
  /// psi_C1 s^{sigma/(sigma+r-1)} + psi_C2 (s^{2/(m+1)} + s)
  [[nodiscard]] double Psi(double s) const;
  [[nodiscard]] double apply(Comparison which, double s) const { return which == Comparison::Phi ? Phi(s) : Psi(s); }
};

/// Root z >= 0 of z + F(z) = s, F the chosen comparison function.
double inverse_identity_plus(const DecayModel& model, Comparison which, double s);
/// Root x >= 0 of F(x) = y.
double inverse_comparison(const DecayModel& model, Comparison which, double y);
/// Root y >= 0 of y + F^{-1}(y) = s, each F^{-1} evaluated by a nested root-find.
double inverse_identity_plus_inverse(const DecayModel& model, Comparison which, double s);

struct OdeSolution {
  std::vector<double> t;
  std::vector<double> S;
  double max_inverse_residual = 0.0;  ///< max |z + F(z) - S| / max(1, S) over all stages

  /// Linear interpolation of S at time tau within the solved range.
  [[nodiscard]] double at(double tau) const;
};

/// Classical RK4 for S' = -(I + F)^{-1} S, S(0) = E0, with step 1e-3 t_end.
OdeSolution lt_ode_solve(const DecayModel& model, double E0, double t_end, bool use_psi = false);

struct ComparisonPoint {
  int n = 0;
  double E = 0.0;
  double S = 0.0;
};

struct ComparisonReport {
  bool ok = true;
  double calibrated_C = 0.0;
  std::string calibration;
  std::vector<ComparisonPoint> points;
  std::vector<ComparisonPoint> violations;
};

/// E_n <= S_n (1 + tol) for every sample pair.
ComparisonReport compare_samples(const std::vector<double>& E, const std::vector<double>& S, double tol);

/**
 * Samples E at t = nT (linear interpolation between ledger rows), calibrates
 * phi_C so that the ODE solution passes through E(T) at n = 1 (clamped to
 * [1e-12, 1e12]; if even the smallest constant gives S(1) > E(T) the bound
 * already holds there), then checks E(nT) <= S(n)(1 + tol) for n >= 2.
 */
ComparisonReport comparison_check(const EnergyLedger& ledger, const DecayModel& model, double tol = 1e-6);

struct BootstrapResult {
  int iterations = 0;
  std::vector<double> sigma_sequence;
};

/// sigma_{n+1} = sigma_n + (2 - r)/2 until sigma_n reaches r - 1 (ties within 1e-12 count as reached).
BootstrapResult optimal_rate_bootstrap(double sigma1, double r);

}  // namespace viscowave
