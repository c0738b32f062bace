#pragma once

#include "viscowave/grid.hpp"
#include "viscowave/history.hpp"
#include "viscowave/kernel.hpp"

namespace viscowave {

/// Test switches for isolating parts of the dynamics.
struct StepSwitches {
  bool damping = true;
  bool source = true;
  bool memory = true;

  bool operator==(const StepSwitches&) const = default;
};

/// Exponents and kernel of u_tt = k(0) lap u - int mu lap u(t-s) ds - |u_t|^{m-1} u_t + |u|^{p-1} u.
struct Dynamics {
  RelaxationKernel kernel;
  double m = 1.0;
  double p = 3.0;
  StepSwitches switches;
};

/**
 * @brief Simulation state at one time level.
 *
 * Besides (u, v) and the memory buffer it caches the acceleration at (t, u)
 * and the two memory quadratures against u, which the next half-kick and the
 * dissipation bookkeeping reuse.
 */
struct SimState {
  double t = 0.0;
  Field u;
  Field v;
  MemoryState memory;
  double dt = 0.0;
  long step_index = 0;

  Field acceleration;
  double memory_mu = 0.0;        ///< int ||grad w||^2 mu ds at (t, u)
  double memory_mu_prime = 0.0;  ///< int ||grad w||^2 mu' ds at (t, u)
  double discrete_k0 = 1.0;      ///< 1 + quadrature of int mu, multiplies lap u
};

/// Unique v with v + dt |v|^{m-1} v = a.
double pointwise_damping_solve(double a, double dt, double m);

/// Largest stable step cfl * (k0 * sum_axis h^-2)^(-1/2).
double stability_bound(const SpatialGrid& grid, double k0, double cfl_safety);

/// Builds the t = 0 state from a history datum sampled at the memory spacing.
SimState make_initial_state(const HistoryDatum& datum, const Dynamics& dynamics, double dt,
                            const MemoryOptions& memory_options = {});

/// Recomputes the cached acceleration and memory quadratures for the current (t, u).
void refresh(SimState& state, const Dynamics& dynamics);

/**
 * One step of kick / drift / damp / drift / kick.
 *
 * The frictional damping is integrated with the implicit midpoint rule,
 * z = pointwise_damping_solve(v, dt/2, m), v <- 2z - v, which dissipates
 * exactly dt |z|^{m+1} per node and keeps the composition symmetric.
 * Throws BlowupOrInstability when the new state is not finite.
 */
void step(SimState& state, const Dynamics& dynamics);

}  // namespace viscowave
