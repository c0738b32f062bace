#pragma once

#include <optional>
#include <string>

#include "viscowave/grid.hpp"

namespace viscowave {

/// Discrete Sobolev constant and the potential-well thresholds derived from it.
struct WellConstants {
  double gamma = 0.0;
  double d = 0.0;
  double y0 = 0.0;
  std::optional<double> M;
  std::string M_absent_reason;
  double p = 0.0;
  double k0 = 0.0;
  std::string grid_fingerprint;
};

struct GammaOptions {
  double rel_tol = 1e-10;
  int max_iter = 10000;
};

struct GammaResult {
  double gamma = 0.0;
  Field ground_state;  ///< maximiser normalised to ||grad u||_2 = 1, positive
  int iterations = 0;
};

/**
 * Best constant of ||u||_{p+1} <= gamma ||grad u||_2 over discrete fields.
 *
 * Iterates u <- poisson_solve(|u|^{p-1} u), renormalised in the discrete H1
 * seminorm, from the first Dirichlet eigenmode. The Rayleigh ratio increases
 * monotonically along the iteration; it stops once the relative change drops
 * below rel_tol and throws ConvergenceError after max_iter sweeps.
 */
GammaResult sobolev_gamma(const SpatialGrid& grid, double p, const GammaOptions& options = {});

/// d = (p-1) / (2(p+1)) * gamma^(-2(p+1)/(p-1)).
double mountain_pass_d(double gamma, double p);

struct Thresholds {
  double y0 = 0.0;
  std::optional<double> M;
  std::string M_absent_reason;
};

/// y0 = (p+1)/(p-1) d and, when p > sqrt(k0) > 1, the blow-up energy level M < d.
Thresholds thresholds(double d, double p, double k0);

WellConstants compute_well_constants(const SpatialGrid& grid, double p, double k0,
                                     const GammaOptions& options = {});

}  // namespace viscowave
