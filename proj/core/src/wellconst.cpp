#include "viscowave/wellconst.hpp"

#include <array>
#include <cmath>

#include "parse_util.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

GammaResult sobolev_gamma(const SpatialGrid& grid, double p, const GammaOptions& options) {
  if (!(p >= 1.0)) throw ValidationError("sobolev_gamma needs p >= 1");
  const std::array<int, 2> first{1, 1};
  Field u = Field::sine_mode(grid, std::span<const int>(first.data(), grid.dim()));
  u *= 1.0 / std::sqrt(h1_seminorm_sq(u));
  double ratio = std::pow(lp_norm_pow(u, p + 1.0), 1.0 / (p + 1.0));

  Field source(grid);
  for (int it = 1; it <= options.max_iter; ++it) {
    for (std::size_t i = 0; i < u.size(); ++i) source[i] = std::pow(std::abs(u[i]), p - 1.0) * u[i];
    u = poisson_solve(source);
    u *= 1.0 / std::sqrt(h1_seminorm_sq(u));
    const double next = std::pow(lp_norm_pow(u, p + 1.0), 1.0 / (p + 1.0));
    const bool done = std::abs(next - ratio) < options.rel_tol * next;
    ratio = next;
    if (done) return {ratio, std::move(u), it};
  }
  throw ConvergenceError("sobolev_gamma: fixed-point iteration did not converge", ratio);
}

double mountain_pass_d(double gamma, double p) {
  if (!(gamma > 0.0)) throw ValidationError("mountain_pass_d needs gamma > 0");
  if (!(p > 1.0)) throw ValidationError("mountain_pass_d needs p > 1");
  return (p - 1.0) / (2.0 * (p + 1.0)) * std::pow(gamma, -2.0 * (p + 1.0) / (p - 1.0));
}

Thresholds thresholds(double d, double p, double k0) {
  if (!(d > 0.0)) throw ValidationError("thresholds need d > 0");
  if (!(p > 1.0)) throw ValidationError("thresholds need p > 1");
  Thresholds out;
  out.y0 = (p + 1.0) / (p - 1.0) * d;
  const double root_k0 = std::sqrt(k0);
  if (!(root_k0 > 1.0)) {
    out.M_absent_reason = "requires k(0) > 1";
  } else if (!(p > root_k0)) {
    out.M_absent_reason = "requires p > sqrt(k(0)) = " + detail::format_real(root_k0);
  } else {
    out.M = std::pow((root_k0 + 1.0) / 2.0, 2.0 / (p - 1.0)) * (p - root_k0) / (p - 1.0) * d;
  }
  return out;
}

WellConstants compute_well_constants(const SpatialGrid& grid, double p, double k0, const GammaOptions& options) {
  WellConstants wc;
  wc.p = p;
  wc.k0 = k0;
  wc.grid_fingerprint = grid.spec();
  wc.gamma = sobolev_gamma(grid, p, options).gamma;
  wc.d = mountain_pass_d(wc.gamma, p);
  auto th = thresholds(wc.d, p, k0);
  wc.y0 = th.y0;
  wc.M = th.M;
  wc.M_absent_reason = std::move(th.M_absent_reason);
  return wc;
}

}  // namespace viscowave
