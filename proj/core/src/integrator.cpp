#include "viscowave/integrator.hpp"

#include <cmath>
#include <string>

#include "viscowave/error.hpp"

namespace viscowave {

double pointwise_damping_solve(double a, double dt, double m) {
  if (!(dt > 0.0)) throw ValidationError("damping solve needs dt > 0");
  if (!(m >= 1.0)) throw ValidationError("damping solve needs m >= 1");
  if (a == 0.0) return 0.0;
  if (m == 1.0) return a / (1.0 + dt);

  // Solve x + dt x^m = |a| for x >= 0. The map is convex and increasing, so
  // Newton from an upper bound decreases monotonically onto the root.
  const double target = std::abs(a);
  double hi = std::min(target, std::pow(target / dt, 1.0 / m));
  double lo = 0.0;
  double x = hi;
  const double tol = 1e-14 * std::max(1.0, target);
  for (int it = 0; it < 200; ++it) {
    const double xm1 = std::pow(x, m - 1.0);
    const double f = x + dt * xm1 * x - target;
    if (std::abs(f) <= tol) break;
    if (f > 0.0) hi = x; else lo = x;
    double next = x - f / (1.0 + dt * m * xm1);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return std::copysign(x, a);
}

double stability_bound(const SpatialGrid& grid, double k0, double cfl_safety) {
  double inv = 0.0;
  for (int a = 0; a < grid.dim(); ++a) inv += 1.0 / (grid.h(a) * grid.h(a));
  return cfl_safety / std::sqrt(k0 * inv);
}

void refresh(SimState& state, const Dynamics& dynamics) {
  const Field& u = state.u;
  Field& acc = state.acceleration;
  laplacian_into(u, acc);
  if (dynamics.switches.memory) {
    const MemoryEvaluation eval = state.memory.evaluate(u, true, true);
    state.discrete_k0 = 1.0 + eval.mass;
    acc *= state.discrete_k0;
    acc -= eval.force;
    state.memory_mu = eval.integral_mu;
    state.memory_mu_prime = eval.integral_mu_prime;
  } else {
    state.discrete_k0 = 1.0;
    state.memory_mu = 0.0;
    state.memory_mu_prime = 0.0;
  }
  if (dynamics.switches.source) {
    const double p = dynamics.p;
    if (p == 3.0) {
      for (std::size_t i = 0; i < u.size(); ++i) acc[i] += u[i] * u[i] * u[i];
    } else {
      for (std::size_t i = 0; i < u.size(); ++i) acc[i] += std::pow(std::abs(u[i]), p - 1.0) * u[i];
    }
  }
}

SimState make_initial_state(const HistoryDatum& datum, const Dynamics& dynamics, double dt,
                            const MemoryOptions& memory_options) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  SimState s{0.0, datum.at_zero(), datum.velocity_at_0(), MemoryState(datum, dynamics.kernel, memory_options), dt, 0,
             Field(datum.grid()), 0.0, 0.0, 1.0};
  refresh(s, dynamics);
  return s;
}

void step(SimState& s, const Dynamics& dynamics) {
  const double dt = s.dt;
  const double half = 0.5 * dt;
  const std::size_t n = s.u.size();

  s.v.axpy(half, s.acceleration);
  s.u.axpy(half, s.v);
  if (dynamics.switches.damping) {
    const double m = dynamics.m;
    if (m == 1.0) {
      const double factor = (1.0 - half) / (1.0 + half);
      s.v *= factor;
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double z = pointwise_damping_solve(s.v[i], half, m);
        s.v[i] = 2.0 * z - s.v[i];
      }
    }
  }
  s.u.axpy(half, s.v);
  s.t += dt;
  s.memory.record(s.t, s.u);
  refresh(s, dynamics);
  s.v.axpy(half, s.acceleration);
  ++s.step_index;

  if (!s.u.all_finite() || !s.v.all_finite() || !s.acceleration.all_finite()) {
    throw BlowupOrInstability("non-finite state at step " + std::to_string(s.step_index), s.step_index);
  }
}

}  // namespace viscowave
