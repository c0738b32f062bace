#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace viscowave {

/**
 * @brief Uniform 1-D segment or 2-D rectangle with homogeneous Dirichlet data.
 *
 * Only interior nodes are stored; boundary values are identically zero and
 * never materialised. Spacing along each axis is extent / (n + 1).
 */
class SpatialGrid {
 public:
  static SpatialGrid line(double extent, int n);
  static SpatialGrid rectangle(double lx, double ly, int nx, int ny);

  /// "1d:<L>:<n>" or "2d:<Lx>x<Ly>:<nx>x<ny>"; lengths accept "pi".
  static SpatialGrid parse(std::string_view spec);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int n(int axis) const { return n_[axis]; }
  [[nodiscard]] double extent(int axis) const { return extent_[axis]; }
  [[nodiscard]] double h(int axis) const { return extent_[axis] / (n_[axis] + 1); }
  [[nodiscard]] std::size_t size() const noexcept;
  /// h^dim, the weight of one node in midpoint quadrature.
  [[nodiscard]] double cell_volume() const noexcept;
  /// Coordinate of interior node i (0-based) along axis.
  [[nodiscard]] double coordinate(int axis, int i) const { return (i + 1) * h(axis); }

  /// Smallest eigenvalue of the discrete Dirichlet -Laplacian.
  [[nodiscard]] double lowest_eigenvalue() const;

  [[nodiscard]] std::string spec() const;

  bool operator==(const SpatialGrid&) const = default;

 private:
  int dim_ = 1;
  std::array<int, 2> n_{0, 1};
  std::array<double, 2> extent_{0.0, 1.0};
};

/// Nodal scalar field on the interior of a grid.
class Field {
 public:
  Field() = default;
  explicit Field(const SpatialGrid& grid, double fill = 0.0);
  Field(const SpatialGrid& grid, std::vector<double> values);

  /// A * prod_axis sin(k_axis * pi * x_axis / L_axis).
  static Field sine_mode(const SpatialGrid& grid, std::span<const int> modes, double amplitude = 1.0);

  [[nodiscard]] const SpatialGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double alpha);
  /// this += alpha * x
  Field& axpy(double alpha, const Field& x);

  [[nodiscard]] bool all_finite() const noexcept;
  [[nodiscard]] bool is_zero() const noexcept;

  bool operator==(const Field&) const = default;

 private:
  SpatialGrid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double alpha, Field f);

/// Throws ValidationError unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b);

/// Second-order centered Laplacian with zero exterior values.
Field laplacian(const Field& f);
void laplacian_into(const Field& f, Field& out);

/// sum over edges (including boundary edges) of (df/h)^2 * h^dim.
double h1_seminorm_sq(const Field& f);
/// Bilinear form associated with h1_seminorm_sq.
double h1_inner(const Field& f, const Field& g);
/// sum f_i^2 h^dim.
double l2_norm_sq(const Field& f);
/// sum |f_i|^q h^dim, i.e. ||f||_q^q.
double lp_norm_pow(const Field& f, double q);
/// Raw sum f_i g_i (no quadrature weight).
double dot(const Field& f, const Field& g);
/// sum f_i g_i h^dim.
double l2_inner(const Field& f, const Field& g);

struct PoissonOptions {
  double rel_tol = 1e-12;
  int max_iter = 0;  ///< 0 picks 10 * size
};

/// Solves -laplacian(f) = rhs; direct tridiagonal in 1-D, conjugate gradients in 2-D.
Field poisson_solve(const Field& rhs, const PoissonOptions& options = {});

/// Span-level stencil kernels for a 1-D line of nodes with spacing h.
namespace stencil {
double h1_seminorm_sq_1d(std::span<const double> f, double h);
void laplacian_1d(std::span<const double> f, double h, std::span<double> out);
}  // namespace stencil

}  // namespace viscowave
