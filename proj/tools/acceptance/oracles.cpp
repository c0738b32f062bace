#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace viscowave::oracle {

namespace {

struct Line {
  int n;
  double h;

  double h1(const std::vector<double>& u) const {
    double s = 0.0, prev = 0.0;
    for (double x : u) {
      s += (x - prev) * (x - prev);
      prev = x;
    }
    s += prev * prev;
    return s / h;
  }

  double lq(const std::vector<double>& u, double q) const {
    double s = 0.0;
    for (double x : u) s += std::pow(std::abs(x), q);
    return s * h;
  }

  // Solves (-u'' discretised) x = b with zero ends.
  std::vector<double> solve(std::vector<double> b) const {
    std::vector<double> c(n, 0.0);
    const double off = -1.0 / (h * h), diag = 2.0 / (h * h);
    double denom = diag;
    c[0] = off / denom;
    b[0] /= denom;
    for (int i = 1; i < n; ++i) {
      denom = diag - off * c[i - 1];
      c[i] = off / denom;
      b[i] = (b[i] - off * b[i - 1]) / denom;
    }
    for (int i = n - 2; i >= 0; --i) b[i] -= c[i] * b[i + 1];
    return b;
  }
};

}  // namespace

double sobolev_ratio_ascent(int n, double L, double p, int restarts, std::uint64_t seed) {
  const Line line{n, L / (n + 1)};
  const double q = p + 1.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double best = 0.0;

  for (int r = 0; r < restarts; ++r) {
    // Smooth random start: a few random sine modes plus nodal noise.
    std::vector<double> u(n);
    const double a1 = normal(rng), a2 = normal(rng), a3 = normal(rng);
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * line.h / L * M_PI;
      u[i] = a1 * std::sin(x) + a2 * std::sin(2 * x) + a3 * std::sin(3 * x) + 0.1 * normal(rng);
    }
    auto normalise = [&](std::vector<double>& v) {
      const double s = 1.0 / std::sqrt(line.h1(v));
      for (double& x : v) x *= s;
    };
    normalise(u);
    double value = line.lq(u, q);
    // h1(u) = h u^T K u with K the discrete -Laplacian, F(u) = h sum |u|^q.
    // The H1 gradient of F is G = K^{-1} g / h with g the Euclidean gradient,
    // and <G, u>_H1 = g.u = q F(u). Each step moves half-way along the
    // tangential part of G / (q F) and renormalises.
    const double relax = 0.5;
    std::vector<double> g(n);
    for (int it = 0; it < 20000; ++it) {
      for (int i = 0; i < n; ++i) g[i] = q * std::pow(std::abs(u[i]), q - 2.0) * u[i] * line.h;
      std::vector<double> G = line.solve(g);
      double radial = 0.0;
      for (int i = 0; i < n; ++i) radial += g[i] * u[i];
      for (int i = 0; i < n; ++i) u[i] += relax * (G[i] / line.h - radial * u[i]) / radial;
      normalise(u);
      const double next = line.lq(u, q);
      const bool done = std::abs(next - value) <= 1e-15 * next;
      value = next;
      if (done) break;
    }
    best = std::max(best, std::pow(value, 1.0 / q));
  }
  return best;
}

double simpson(const std::function<double(double)>& f, double a, double b, int nodes) {
  if (nodes % 2 == 0) ++nodes;
  const int m = nodes - 1;
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace viscowave::oracle
