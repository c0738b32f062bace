#include "viscowave/decay.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "parse_util.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

const char* to_string(RateModel model) {
  return model == RateModel::Exponential ? "exponential" : "polynomial";
}

RateFit fit_rate(const EnergyLedger& ledger, double t_lo, double t_hi, RateModel model) {
  if (!(t_hi > t_lo)) throw ValidationError("fit window must satisfy t_lo < t_hi");
  const double floor = 1e-14 * std::abs(ledger.E0());
  std::vector<double> x, y;
  for (const LedgerRow& row : ledger.rows) {
    if (row.t < t_lo || row.t > t_hi) continue;
    if (!(row.E > floor) || !(row.E > 0.0)) continue;
    x.push_back(model == RateModel::Exponential ? row.t : std::log1p(row.t));
    y.push_back(std::log(row.E));
  }
  if (x.size() < 10) {
    throw ValidationError("fit window holds " + std::to_string(x.size()) + " usable rows, need at least 10");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit window has no spread in time");
  const double slope = sxy / sxx;
  RateFit fit;
  fit.rate = -slope;
  fit.rows_used = x.size();
  if (syy <= 1e-300) {
    fit.goodness = 1.0;
  } else {
    const double ss_res = std::max(0.0, syy - slope * sxy);
    fit.goodness = 1.0 - ss_res / syy;
  }
  return fit;
}

RatePrediction predicted_rate(double m, KernelFamily family, std::optional<double> r, std::optional<double> sigma,
                              bool compact_support) {
  if (!(m >= 1.0)) throw ValidationError("predicted_rate needs m >= 1");
  RatePrediction out;
  if (family == KernelFamily::Exponential) {
    if (m == 1.0) {
      out.decay_case = 1;
      out.kind = RateModel::Exponential;
    } else {
      out.decay_case = 2;
      out.kind = RateModel::Polynomial;
      out.exponent = 2.0 / (m - 1.0);
    }
    return out;
  }
  if (!r || !(*r > 1.0 && *r < 2.0)) throw ValidationError("polynomial kernel prediction needs r in (1,2)");
  double kernel_rate = 0.0;
  if (compact_support) {
    kernel_rate = 1.0 / (*r - 1.0);
  } else {
    if (!sigma || !(*sigma > 0.0 && *sigma < 2.0 - *r)) {
      throw ValidationError("sigma must lie in (0, 2 - r) without compactly supported history");
    }
    kernel_rate = *sigma / (*r - 1.0);
  }
  out.kind = RateModel::Polynomial;
  if (m == 1.0) {
    out.decay_case = 3;
    out.exponent = kernel_rate;
  } else {
    out.decay_case = 4;
    out.exponent = std::max(kernel_rate, 2.0 / (m - 1.0));
  }
  return out;
}

double DecayModel::Phi(double s) const {
  if (s <= 0.0) return 0.0;
  return phi_C * (std::pow(s, 2.0 / (m + 1.0)) + s);
}

double DecayModel::Psi(double s) const {
  if (s <= 0.0) return 0.0;
  if (!r || !sigma) throw ValidationError("Psi needs r and sigma");
  return psi_C1 * std::pow(s, *sigma / (*sigma + *r - 1.0)) + psi_C2 * (std::pow(s, 2.0 / (m + 1.0)) + s);
}

namespace {

double derivative(const DecayModel& model, Comparison which, double s) {
  const double a = 2.0 / (model.m + 1.0);
  double d = 0.0;
  if (which == Comparison::Phi) {
    d = model.phi_C * (a * std::pow(s, a - 1.0) + 1.0);
  } else {
    const double b = *model.sigma / (*model.sigma + *model.r - 1.0);
    d = model.psi_C1 * b * std::pow(s, b - 1.0) + model.psi_C2 * (a * std::pow(s, a - 1.0) + 1.0);
  }
  return d;
}

// Root of the increasing function g on [lo, hi] with g(lo) <= 0 <= g(hi):
// Newton steps, replaced by bisection whenever they leave the bracket.
double monotone_root(const std::function<double(double)>& g, const std::function<double(double)>& dg, double lo,
                     double hi, double scale) {
  const double tol = 1e-15 * scale;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double f = g(x);
    if (std::abs(f) <= tol) return x;
    if (f > 0.0) hi = x; else lo = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return x;
    const double slope = dg(x);
    double next = std::isfinite(slope) && slope > 0.0 ? x - f / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace

double inverse_identity_plus(const DecayModel& model, Comparison which, double s) {
  if (s < 0.0) throw ValidationError("(I+F)^-1 needs s >= 0");
  if (s == 0.0) return 0.0;
  return monotone_root([&](double z) { return z + model.apply(which, z) - s; },
                       [&](double z) { return 1.0 + derivative(model, which, z); }, 0.0, s, s);
}

double inverse_comparison(const DecayModel& model, Comparison which, double y) {
  if (y < 0.0) throw ValidationError("F^-1 needs y >= 0");
  if (y == 0.0) return 0.0;
  double hi = 1.0;
  while (model.apply(which, hi) < y) hi *= 2.0;
  return monotone_root([&](double x) { return model.apply(which, x) - y; },
                       [&](double x) { return derivative(model, which, x); }, 0.0, hi, y);
}

double inverse_identity_plus_inverse(const DecayModel& model, Comparison which, double s) {
  if (s < 0.0) throw ValidationError("(I+F^-1)^-1 needs s >= 0");
  if (s == 0.0) return 0.0;
  return monotone_root(
      [&](double y) { return y + inverse_comparison(model, which, y) - s; },
      [&](double y) {
        const double x = inverse_comparison(model, which, y);
        return 1.0 + 1.0 / derivative(model, which, x);
      },
      0.0, s, s);
}

double OdeSolution::at(double tau) const {
  if (t.empty()) throw ValidationError("empty ODE solution");
  if (tau <= t.front()) return S.front();
  if (tau >= t.back()) return S.back();
  const auto it = std::upper_bound(t.begin(), t.end(), tau);
  const auto j = static_cast<std::size_t>(it - t.begin());
  const double w = (tau - t[j - 1]) / (t[j] - t[j - 1]);
  return (1.0 - w) * S[j - 1] + w * S[j];
}

OdeSolution lt_ode_solve(const DecayModel& model, double E0, double t_end, bool use_psi) {
  if (!(E0 >= 0.0)) throw ValidationError("comparison ODE needs E0 >= 0");
  if (!(t_end > 0.0)) throw ValidationError("comparison ODE needs t_end > 0");
  const Comparison which = use_psi ? Comparison::Psi : Comparison::Phi;
  const int steps = 1000;
  const double h = t_end / steps;
  OdeSolution sol;
  sol.t.reserve(steps + 1);
  sol.S.reserve(steps + 1);

  auto rhs = [&](double S) {
    if (S <= 0.0) return 0.0;
    const double z = inverse_identity_plus(model, which, S);
    const double residual = std::abs(z + model.apply(which, z) - S) / std::max(1.0, S);
    sol.max_inverse_residual = std::max(sol.max_inverse_residual, residual);
    return -z;
  };

  double S = E0;
  sol.t.push_back(0.0);
  sol.S.push_back(S);
  for (int k = 1; k <= steps; ++k) {
    const double k1 = rhs(S);
    const double k2 = rhs(S + 0.5 * h * k1);
    const double k3 = rhs(S + 0.5 * h * k2);
    const double k4 = rhs(S + h * k3);
    S += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    sol.t.push_back(k * h);
    sol.S.push_back(S);
  }
  return sol;
}

ComparisonReport compare_samples(const std::vector<double>& E, const std::vector<double>& S, double tol) {
  if (E.size() != S.size()) throw ValidationError("comparison series differ in length");
  ComparisonReport report;
  for (std::size_t n = 0; n < E.size(); ++n) {
    const ComparisonPoint pt{static_cast<int>(n), E[n], S[n]};
    report.points.push_back(pt);
    if (E[n] > S[n] * (1.0 + tol)) report.violations.push_back(pt);
  }
  report.ok = report.violations.empty();
  return report;
}

namespace {

double ledger_energy_at(const EnergyLedger& ledger, double t) {
  const auto& rows = ledger.rows;
  const auto it = std::lower_bound(rows.begin(), rows.end(), t, [](const LedgerRow& r, double v) { return r.t < v; });
  if (it == rows.end()) return rows.back().E;
  if (it == rows.begin() || it->t == t) return it->E;
  const LedgerRow& b = *it;
  const LedgerRow& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return (1.0 - w) * a.E + w * b.E;
}

}  // namespace

ComparisonReport comparison_check(const EnergyLedger& ledger, const DecayModel& model, double tol) {
  if (ledger.rows.empty()) throw ValidationError("comparison needs a non-empty ledger");
  const double T = model.T_reiter;
  if (!(T > 0.0)) throw ValidationError("reiteration time must be positive");
  const int N = static_cast<int>(std::floor(ledger.rows.back().t / T + 1e-9));
  if (N < 2) throw ValidationError("ledger must cover at least two reiteration intervals");

  std::vector<double> E(N + 1);
  for (int n = 0; n <= N; ++n) E[n] = ledger_energy_at(ledger, n * T);
  const double E0 = E[0];
  if (!(E0 > 0.0)) {
    auto report = compare_samples(E, std::vector<double>(N + 1, std::max(0.0, E0)), tol);
    report.calibration = "E(0) <= 0: S is identically E(0)";
    return report;
  }

  auto S_at_one = [&](double C) {
    DecayModel trial = model;
    trial.phi_C = C;
    return lt_ode_solve(trial, E0, 1.0).S.back();
  };
  const double c_lo = 1e-12, c_hi = 1e12;
  double C = 0.0;
  std::string note;
  if (S_at_one(c_lo) >= E[1]) {
    C = c_lo;
    note = "S(1) exceeds E(T) for the smallest constant; phi_C clamped to 1e-12";
  } else if (S_at_one(c_hi) < E[1]) {
    C = c_hi;
    note = "no constant up to 1e12 reaches E(T); phi_C clamped to 1e12";
  } else {
    double lo = std::log(c_lo), hi = std::log(c_hi);
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (S_at_one(std::exp(mid)) >= E[1]) hi = mid; else lo = mid;
    }
    C = std::exp(hi);
    note = "phi_C chosen so that S(1) = E(T) (bisection in log C, S(0) = E(0))";
  }

  DecayModel fitted = model;
  fitted.phi_C = C;
  const OdeSolution sol = lt_ode_solve(fitted, E0, static_cast<double>(N));
  std::vector<double> S(N + 1);
  for (int n = 0; n <= N; ++n) S[n] = sol.at(n);

  ComparisonReport report = compare_samples(E, S, tol);
  report.calibrated_C = C;
  report.calibration = note + ", T = " + detail::format_real(T);
  return report;
}

BootstrapResult optimal_rate_bootstrap(double sigma1, double r) {
  if (!(r > 1.0 && r < 2.0)) throw ValidationError("bootstrap needs r in (1,2)");
  if (!(sigma1 > 0.0 && sigma1 < 1.0)) throw ValidationError("bootstrap needs sigma1 in (0,1)");
  if (sigma1 == r - 1.0) throw ValidationError("bootstrap needs sigma1 != r - 1");
  BootstrapResult out;
  const double increment = 0.5 * (2.0 - r);
  const double target = r - 1.0;
  const int limit = static_cast<int>(std::ceil(target / increment)) + 1;
  double sigma = sigma1;
  out.sigma_sequence.push_back(sigma);
  while (sigma < target - 1e-12 && out.iterations < limit) {
    sigma += increment;
    ++out.iterations;
    out.sigma_sequence.push_back(sigma);
  }
  return out;
}

}  // namespace viscowave
