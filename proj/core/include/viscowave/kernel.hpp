#pragma once

#include <string>
#include <string_view>

namespace viscowave {

enum class KernelFamily { Exponential, Polynomial };

/**
 * @brief Relaxation kernel mu(s) = -k'(s) of the fading-memory term.
 *
 * Two closed-form families are supported:
 *  - Exponential(mu0, c):  mu(s) = mu0 * exp(-c s)
 *  - Polynomial(c, r):     mu(s) = c * (1 + s)^(-1/(r-1)),  r in (1, 2)
 *
 * Both are strictly positive, strictly decreasing and integrable, so the
 * instantaneous modulus k(0) = 1 + int_0^inf mu is finite and every tail
 * integral is available in closed form. Instances are immutable.
 */
class RelaxationKernel {
 public:
  static RelaxationKernel exponential(double mu0, double c);
  static RelaxationKernel polynomial(double c, double r);

  /// Parses "exp:<mu0>:<c>" or "poly:<c>:<r>".
  static RelaxationKernel parse(std::string_view spec);

  [[nodiscard]] KernelFamily family() const noexcept { return family_; }
  [[nodiscard]] double mu0() const noexcept { return a_; }  // exponential only
  [[nodiscard]] double c() const noexcept { return family_ == KernelFamily::Exponential ? b_ : a_; }
  [[nodiscard]] double r() const noexcept { return family_ == KernelFamily::Polynomial ? b_ : 0.0; }

  [[nodiscard]] double mu(double s) const;
  [[nodiscard]] double mu_prime(double s) const;
  /// int_{s_max}^inf mu(s) ds.
  [[nodiscard]] double tail_mass(double s_max) const;
  /// k(s) = 1 + tail_mass(s).
  [[nodiscard]] double k_at(double s) const;
  [[nodiscard]] double k0() const { return 1.0 + tail_mass(0.0); }

  /// Smallest s with tail_mass(s) <= fraction * (k0 - 1).
  [[nodiscard]] double depth_for_tail_fraction(double fraction) const;

  [[nodiscard]] std::string spec() const;

  bool operator==(const RelaxationKernel&) const = default;

 private:
  RelaxationKernel(KernelFamily family, double a, double b) : family_(family), a_(a), b_(b) {}

  KernelFamily family_;
  double a_;
  double b_;
};

/// Outcome of checking a kernel against the admissibility conditions.
struct DecayClassReport {
  KernelFamily family = KernelFamily::Exponential;
  double r = 0.0;  ///< polynomial exponent, 0 for the exponential class
  double C = 0.0;  ///< largest C with mu' + C mu^r <= 0 (r = 1 for exponential)
  double k0 = 0.0;
  bool ok = true;
  std::string violation;  ///< first failed condition and where, empty when ok
};

/**
 * Verifies positivity, monotonicity and integrability of mu on a logarithmic
 * sample grid over [0, 1e3] and reports the decay class with its constant C.
 * For the polynomial family C is the sampled infimum of -mu'/mu^r.
 */
DecayClassReport validate_assumptions(const RelaxationKernel& kernel);

}  // namespace viscowave
