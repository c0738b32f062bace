#include <doctest.h>

#include <cmath>
#include <limits>

#include <viscowave/error.hpp>
#include <viscowave/kernel.hpp>

#include "oracles.hpp"

using namespace viscowave;
using doctest::Approx;

TEST_CASE("kernel values at sample points") {
  const auto e = RelaxationKernel::exponential(1.0, 1.0);
  const auto q = RelaxationKernel::polynomial(1.0, 1.5);
  CHECK(e.mu(0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(e.mu(1.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(q.mu(1.0) == Approx(0.25).epsilon(1e-15));
  CHECK(e.mu_prime(0.0) == Approx(-1.0).epsilon(1e-15));
  CHECK(q.mu_prime(0.0) == Approx(-2.0).epsilon(1e-15));
  CHECK(std::abs(e.mu_prime(1e6)) < 1e-12);
  CHECK(std::abs(q.mu_prime(1e6)) < 1e-12);
}

TEST_CASE("tail mass and k") {
  const auto e = RelaxationKernel::exponential(1.0, 1.0);
  const auto q = RelaxationKernel::polynomial(1.0, 1.5);
  CHECK(e.tail_mass(0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(q.tail_mass(0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(e.k0() == Approx(2.0));
  CHECK(q.k0() == Approx(2.0));
  CHECK(e.tail_mass(std::log(100.0)) == Approx(0.01).epsilon(1e-13));
  CHECK(e.k_at(0.0) == Approx(2.0));
  CHECK(q.k_at(1.0) == Approx(1.5).epsilon(1e-15));
  CHECK(std::abs(e.k_at(1e9) - 1.0) < 1e-6);
  CHECK(std::abs(q.k_at(1e9) - 1.0) < 1e-6);
}

TEST_CASE("tail mass matches Simpson quadrature of mu") {
  for (const auto& k : {RelaxationKernel::exponential(0.7, 1.3), RelaxationKernel::polynomial(2.0, 1.4)}) {
    for (double s0 : {0.0, 0.5, 3.0}) {
      // Substitute s = s0 + x / (1 - x) to map [s0, inf) onto [0, 1).
      auto integrand = [&](double x) {
        if (x >= 1.0) return 0.0;
        const double jac = 1.0 / ((1.0 - x) * (1.0 - x));
        return k.mu(s0 + x / (1.0 - x)) * jac;
      };
      const double quad = oracle::simpson(integrand, 0.0, 1.0, 20001);
      CHECK(k.tail_mass(s0) == Approx(quad).epsilon(1e-6));
    }
  }
}

TEST_CASE("kernel sign and decay-class inequalities on a sample grid") {
  const auto e = RelaxationKernel::exponential(1.0, 2.0);
  const auto q = RelaxationKernel::polynomial(1.0, 1.5);
  for (double s = 0.0; s < 200.0; s = s * 1.3 + 0.01) {
    CHECK(e.mu(s) > 0.0);
    CHECK(e.mu_prime(s) <= 0.0);
    CHECK(e.mu_prime(s) + 2.0 * e.mu(s) <= 1e-15);
    CHECK(q.mu(s) > 0.0);
    CHECK(q.mu_prime(s) <= 0.0);
    CHECK(q.mu_prime(s) + 2.0 * std::pow(q.mu(s), 1.5) <= 1e-12 * q.mu(s));
  }
}

TEST_CASE("validate_assumptions reports class and constant") {
  const auto re = validate_assumptions(RelaxationKernel::exponential(1.0, 2.0));
  CHECK(re.ok);
  CHECK(re.family == KernelFamily::Exponential);
  CHECK(re.C == Approx(2.0));
  CHECK(re.k0 == Approx(1.5));

  // Brute-force infimum of -mu'/mu^r with a centred difference on a fine grid.
  const auto q = RelaxationKernel::polynomial(1.0, 1.5);
  double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20000; ++i) {
    const double s = 0.05 * i;
    const double h = 1e-5 * (1.0 + s);
    const double deriv = (q.mu(s + h) - q.mu(std::max(0.0, s - h))) / (s + h - std::max(0.0, s - h));
    inf = std::min(inf, -deriv / std::pow(q.mu(s), 1.5));
  }
  const auto rp = validate_assumptions(q);
  CHECK(rp.ok);
  CHECK(rp.family == KernelFamily::Polynomial);
  CHECK(rp.r == Approx(1.5));
  CHECK(rp.C == Approx(inf).epsilon(1e-4));
  CHECK(rp.k0 == Approx(2.0));
}

TEST_CASE("kernel parsing and rejection") {
  CHECK(RelaxationKernel::parse("exp:1:1") == RelaxationKernel::exponential(1.0, 1.0));
  CHECK(RelaxationKernel::parse("poly:1:1.5") == RelaxationKernel::polynomial(1.0, 1.5));
  CHECK(RelaxationKernel::parse(RelaxationKernel::polynomial(0.5, 1.25).spec()) ==
        RelaxationKernel::polynomial(0.5, 1.25));
  CHECK_THROWS_AS(RelaxationKernel::polynomial(1.0, 2.5), ValidationError);
  CHECK_THROWS_AS(RelaxationKernel::parse("poly:1:2.5"), ValidationError);
  CHECK_THROWS_AS(RelaxationKernel::parse("gauss:1:1"), ValidationError);
  CHECK_THROWS_AS(RelaxationKernel::exponential(-1.0, 1.0), ValidationError);
  CHECK_THROWS_AS((void)RelaxationKernel::exponential(1.0, 1.0).mu(-0.1), ValidationError);
}
