#include "viscowave/kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "parse_util.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

RelaxationKernel RelaxationKernel::exponential(double mu0, double c) {
  if (!(mu0 > 0.0) || !std::isfinite(mu0)) throw ValidationError("exponential kernel needs mu0 > 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("exponential kernel needs c > 0");
  return {KernelFamily::Exponential, mu0, c};
}

RelaxationKernel RelaxationKernel::polynomial(double c, double r) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("polynomial kernel needs c > 0");
  if (!(r > 1.0 && r < 2.0)) {
    throw ValidationError("polynomial kernel needs r in (1,2), got r = " + detail::format_real(r));
  }
  return {KernelFamily::Polynomial, c, r};
}

RelaxationKernel RelaxationKernel::parse(std::string_view spec) {
  const auto parts = detail::split(spec, ':');
  if (parts.size() != 3) throw ValidationError("kernel spec must be exp:<mu0>:<c> or poly:<c>:<r>");
  const double a = detail::parse_real(parts[1]);
  const double b = detail::parse_real(parts[2]);
  if (parts[0] == "exp") return exponential(a, b);
  if (parts[0] == "poly") return polynomial(a, b);
  throw ValidationError("unknown kernel family '" + std::string(parts[0]) + "'");
}

std::string RelaxationKernel::spec() const {
  std::ostringstream os;
  os << (family_ == KernelFamily::Exponential ? "exp:" : "poly:") << detail::format_real(a_) << ':'
     << detail::format_real(b_);
  return os.str();
}

namespace {

void require_nonnegative(double s) {
  if (!(s >= 0.0)) throw ValidationError("kernel argument must be >= 0");
}

}  // namespace

double RelaxationKernel::mu(double s) const {
  require_nonnegative(s);
  if (family_ == KernelFamily::Exponential) return a_ * std::exp(-b_ * s);
  const double q = 1.0 / (b_ - 1.0);
  return a_ * std::pow(1.0 + s, -q);
}

double RelaxationKernel::mu_prime(double s) const {
  require_nonnegative(s);
  if (family_ == KernelFamily::Exponential) return -b_ * a_ * std::exp(-b_ * s);
  const double q = 1.0 / (b_ - 1.0);
  return -q * a_ * std::pow(1.0 + s, -q - 1.0);
}

double RelaxationKernel::tail_mass(double s_max) const {
  require_nonnegative(s_max);
  if (family_ == KernelFamily::Exponential) return a_ / b_ * std::exp(-b_ * s_max);
  const double r = b_;
  return a_ * (r - 1.0) / (2.0 - r) * std::pow(1.0 + s_max, -(2.0 - r) / (r - 1.0));
}

double RelaxationKernel::k_at(double s) const { return 1.0 + tail_mass(s); }

double RelaxationKernel::depth_for_tail_fraction(double fraction) const {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ValidationError("tail fraction must lie in (0,1)");
  if (family_ == KernelFamily::Exponential) return -std::log(fraction) / b_;
  const double r = b_;
  return std::pow(fraction, -(r - 1.0) / (2.0 - r)) - 1.0;
}

DecayClassReport validate_assumptions(const RelaxationKernel& kernel) {
  DecayClassReport report;
  report.family = kernel.family();
  report.k0 = kernel.k0();

  constexpr int kSamples = 100000;
  constexpr double kLo = 1e-6;
  constexpr double kHi = 1e3;
  auto sample = [](int i) {
    if (i == 0) return 0.0;
    return kLo * std::pow(kHi / kLo, static_cast<double>(i - 1) / (kSamples - 2));
  };

  const double r = kernel.family() == KernelFamily::Polynomial ? kernel.r() : 1.0;
  report.r = kernel.family() == KernelFamily::Polynomial ? r : 0.0;

  if (kernel.family() == KernelFamily::Exponential) {
    report.C = kernel.c();
  } else {
    double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSamples; ++i) {
      const double s = sample(i);
      inf = std::min(inf, -kernel.mu_prime(s) / std::pow(kernel.mu(s), r));
    }
    report.C = inf;
  }

  auto fail = [&report](const std::string& what, double s) {
    report.ok = false;
    report.violation = what + " at s = " + detail::format_real(s);
  };

  double prev_mu = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSamples && report.ok; ++i) {
    const double s = sample(i);
    const double m = kernel.mu(s);
    const double mp = kernel.mu_prime(s);
    if (m == 0.0 && prev_mu < 1e-250) break;  // tail underflowed
    if (!(m > 0.0)) fail("mu(s) <= 0", s);
    else if (!(mp <= 0.0)) fail("mu'(s) > 0", s);
    else if (m > prev_mu) fail("mu not monotone", s);
    else if (mp + report.C * std::pow(m, r) > 1e-12 * std::abs(mp)) fail("decay-class inequality fails", s);
    prev_mu = m;
  }

  const double mass = kernel.tail_mass(0.0);
  if (report.ok && !(std::isfinite(mass) && mass > 0.0)) fail("mu not integrable", 0.0);
  if (report.ok && !(report.k0 > 1.0)) fail("k(0) <= 1", 0.0);
  return report;
}

}  // namespace viscowave
