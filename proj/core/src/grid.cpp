#include "viscowave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parse_util.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

namespace {

void require_axis(double extent, int n) {
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ValidationError("grid extent must be positive");
  if (n < 3) throw ValidationError("grid needs at least 3 interior nodes per axis");
}

}  // namespace

SpatialGrid SpatialGrid::line(double extent, int n) {
  require_axis(extent, n);
  SpatialGrid g;
  g.dim_ = 1;
  g.n_ = {n, 1};
  g.extent_ = {extent, 1.0};
  return g;
}

SpatialGrid SpatialGrid::rectangle(double lx, double ly, int nx, int ny) {
  require_axis(lx, nx);
  require_axis(ly, ny);
  SpatialGrid g;
  g.dim_ = 2;
  g.n_ = {nx, ny};
  g.extent_ = {lx, ly};
  return g;
}

SpatialGrid SpatialGrid::parse(std::string_view spec) {
  const auto parts = detail::split(spec, ':');
  if (parts.size() != 3) throw ValidationError("grid spec must be 1d:<L>:<n> or 2d:<Lx>x<Ly>:<nx>x<ny>");
  if (parts[0] == "1d") {
    return line(detail::parse_real(parts[1]), static_cast<int>(detail::parse_int(parts[2])));
  }
  if (parts[0] == "2d") {
    const auto ext = detail::split(parts[1], 'x');
    const auto cnt = detail::split(parts[2], 'x');
    if (ext.size() != 2 || cnt.size() != 2) throw ValidationError("2d grid spec needs <Lx>x<Ly>:<nx>x<ny>");
    return rectangle(detail::parse_real(ext[0]), detail::parse_real(ext[1]),
                     static_cast<int>(detail::parse_int(cnt[0])), static_cast<int>(detail::parse_int(cnt[1])));
  }
  throw ValidationError("unknown grid dimension '" + std::string(parts[0]) + "'");
}

std::size_t SpatialGrid::size() const noexcept {
  return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(dim_ == 2 ? n_[1] : 1);
}

double SpatialGrid::cell_volume() const noexcept { return dim_ == 1 ? h(0) : h(0) * h(1); }

double SpatialGrid::lowest_eigenvalue() const {
  double lambda = 0.0;
  for (int a = 0; a < dim_; ++a) {
    const double s = std::sin(std::numbers::pi * h(a) / (2.0 * extent_[a]));
    lambda += 4.0 / (h(a) * h(a)) * s * s;
  }
  return lambda;
}

std::string SpatialGrid::spec() const {
  std::ostringstream os;
  if (dim_ == 1) {
    os << "1d:" << detail::format_real(extent_[0]) << ':' << n_[0];
  } else {
    os << "2d:" << detail::format_real(extent_[0]) << 'x' << detail::format_real(extent_[1]) << ':' << n_[0] << 'x'
       << n_[1];
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Field::Field(const SpatialGrid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const SpatialGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ValidationError("field length does not match grid");
}

Field Field::sine_mode(const SpatialGrid& grid, std::span<const int> modes, double amplitude) {
  if (static_cast<int>(modes.size()) != grid.dim()) throw ValidationError("one sine mode number per axis required");
  Field f(grid);
  const int nx = grid.n(0);
  const int ny = grid.dim() == 2 ? grid.n(1) : 1;
  for (int j = 0; j < ny; ++j) {
    double sy = 1.0;
    if (grid.dim() == 2) sy = std::sin(modes[1] * std::numbers::pi * grid.coordinate(1, j) / grid.extent(1));
    for (int i = 0; i < nx; ++i) {
      const double sx = std::sin(modes[0] * std::numbers::pi * grid.coordinate(0, i) / grid.extent(0));
      f[static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * j] = amplitude * sx * sy;
    }
  }
  return f;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid()) || a.size() != b.size()) throw ValidationError("fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double alpha) {
  for (double& x : values_) x *= alpha;
  return *this;
}

Field& Field::axpy(double alpha, const Field& x) {
  require_same_grid(*this, x);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += alpha * x.values_[i];
  return *this;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

bool Field::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double alpha, Field f) { return f *= alpha; }

// ---------------------------------------------------------------------------

namespace stencil {

double h1_seminorm_sq_1d(std::span<const double> f, double h) {
  if (f.empty()) return 0.0;
  double sum = f.front() * f.front() + f.back() * f.back();
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double d = f[i + 1] - f[i];
    sum += d * d;
  }
  return sum / h;
}

void laplacian_1d(std::span<const double> f, double h, std::span<double> out) {
  const std::size_t n = f.size();
  const double inv = 1.0 / (h * h);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? f[i - 1] : 0.0;
    const double right = i + 1 < n ? f[i + 1] : 0.0;
    out[i] = (left - 2.0 * f[i] + right) * inv;
  }
}

}  // namespace stencil

void laplacian_into(const Field& f, Field& out) {
  const SpatialGrid& g = f.grid();
  if (!(out.grid() == g) || out.size() != f.size()) out = Field(g);
  const auto in = f.values();
  auto res = out.values();
  if (g.dim() == 1) {
    stencil::laplacian_1d(in, g.h(0), res);
    return;
  }
  const int nx = g.n(0);
  const int ny = g.n(1);
  const double ix = 1.0 / (g.h(0) * g.h(0));
  const double iy = 1.0 / (g.h(1) * g.h(1));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * j;
      const double c = in[k];
      const double w = i > 0 ? in[k - 1] : 0.0;
      const double e = i + 1 < nx ? in[k + 1] : 0.0;
      const double s = j > 0 ? in[k - nx] : 0.0;
      const double n = j + 1 < ny ? in[k + nx] : 0.0;
      res[k] = (w - 2.0 * c + e) * ix + (s - 2.0 * c + n) * iy;
    }
  }
}

Field laplacian(const Field& f) {
  Field out(f.grid());
  laplacian_into(f, out);
  return out;
}

double h1_inner(const Field& f, const Field& g) {
  require_same_grid(f, g);
  const SpatialGrid& grid = f.grid();
  const auto a = f.values();
  const auto b = g.values();
  const int nx = grid.n(0);
  const int ny = grid.dim() == 2 ? grid.n(1) : 1;
  double sx = 0.0;
  double sy = 0.0;
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = static_cast<std::size_t>(nx) * j;
    // x-edges, including the two boundary edges of each row
    double prev_a = 0.0;
    double prev_b = 0.0;
    for (int i = 0; i < nx; ++i) {
      sx += (a[row + i] - prev_a) * (b[row + i] - prev_b);
      prev_a = a[row + i];
      prev_b = b[row + i];
    }
    sx += prev_a * prev_b;
  }
  if (grid.dim() == 2) {
    for (int i = 0; i < nx; ++i) {
      double prev_a = 0.0;
      double prev_b = 0.0;
      for (int j = 0; j < ny; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * j;
        sy += (a[k] - prev_a) * (b[k] - prev_b);
        prev_a = a[k];
        prev_b = b[k];
      }
      sy += prev_a * prev_b;
    }
  }
  const double vol = grid.cell_volume();
  const double hx = grid.h(0);
  double result = sx * vol / (hx * hx);
  if (grid.dim() == 2) result += sy * vol / (grid.h(1) * grid.h(1));
  return result;
}

double h1_seminorm_sq(const Field& f) {
  if (f.grid().dim() == 1) return stencil::h1_seminorm_sq_1d(f.values(), f.grid().h(0));
  return h1_inner(f, f);
}

double dot(const Field& f, const Field& g) {
  require_same_grid(f, g);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s;
}

double l2_inner(const Field& f, const Field& g) { return dot(f, g) * f.grid().cell_volume(); }

double l2_norm_sq(const Field& f) { return l2_inner(f, f); }

double lp_norm_pow(const Field& f, double q) {
  if (!(q >= 1.0)) throw ValidationError("lp_norm_pow needs q >= 1");
  double s = 0.0;
  if (q == 2.0) {
    for (double x : f.values()) s += x * x;
  } else {
    for (double x : f.values()) s += std::pow(std::abs(x), q);
  }
  return s * f.grid().cell_volume();
}

// ---------------------------------------------------------------------------

namespace {

// Thomas algorithm for the constant tridiagonal (-1, 2, -1) / h^2 system.
void solve_tridiagonal(std::span<const double> rhs, double h, std::span<double> out) {
  const std::size_t n = rhs.size();
  std::vector<double> c(n);
  std::vector<double> d(n);
  const double h2 = h * h;
  double denom = 2.0;
  c[0] = -1.0 / denom;
  d[0] = rhs[0] * h2 / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = 2.0 + c[i - 1];
    c[i] = -1.0 / denom;
    d[i] = (rhs[i] * h2 + d[i - 1]) / denom;
  }
  out[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) out[i] = d[i] - c[i] * out[i + 1];
}

}  // namespace

Field poisson_solve(const Field& rhs, const PoissonOptions& options) {
  const SpatialGrid& g = rhs.grid();
  Field x(g);
  if (rhs.is_zero()) return x;
  if (g.dim() == 1) {
    solve_tridiagonal(rhs.values(), g.h(0), x.values());
    return x;
  }

  // Conjugate gradients on A = -laplacian (symmetric positive definite).
  const int max_iter = options.max_iter > 0 ? options.max_iter : static_cast<int>(10 * g.size());
  Field r = rhs;
  Field p = r;
  Field ap(g);
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  double rr = dot(r, r);
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= options.rel_tol * rhs_norm) return x;
    laplacian_into(p, ap);
    ap *= -1.0;
    const double alpha = rr / dot(p, ap);
    x.axpy(alpha, p);
    r.axpy(-alpha, ap);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
  }
  // The recursive residual can drift; confirm with the true residual before giving up.
  Field true_res = laplacian(x);
  true_res += rhs;
  const double rel = std::sqrt(dot(true_res, true_res)) / rhs_norm;
  if (rel <= options.rel_tol) return x;
  throw ConvergenceError("poisson_solve: conjugate gradients did not converge", rel);
}

}  // namespace viscowave
