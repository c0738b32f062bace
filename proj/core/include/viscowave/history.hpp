#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <vector>

#include "viscowave/grid.hpp"
#include "viscowave/kernel.hpp"
#include "viscowave/wellconst.hpp"

namespace viscowave {

/// How the history is continued beyond its last stored sample.
enum class ExtensionMode {
  Zero,    ///< u0(t) = 0 for t < -T0 (compactly supported history)
  Frozen,  ///< u0(t) = u0(-T0) for t < -T0
};

enum class TemporalProfile {
  Constant,  ///< b(t) = 1
  ExpRamp,   ///< b(t) = exp(rate * t)
  Bump,      ///< b(t) = (1 + cos(pi t / T0)) / 2 on [-T0, 0]
};

/**
 * @brief History datum u0 on t <= 0, sampled on {0, -ds, ..., -T0}.
 *
 * samples()[k] holds u0(-k * spacing()). The extension mode decides what
 * the datum is beyond the oldest sample.
 */
class HistoryDatum {
 public:
  HistoryDatum(std::vector<Field> samples, double spacing, ExtensionMode mode, Field velocity_at_0);

  /// Time-invariant datum u0(t) = u for all t <= 0.
  static HistoryDatum constant(const Field& u);

  /// u0(t) = shape * b(t) with b one of the analytic temporal profiles.
  static HistoryDatum from_profile(const Field& shape, TemporalProfile profile, double support, double rate,
                                   ExtensionMode mode, double spacing);

  /// CSV rows "t, v_1, ..., v_N" with t <= 0, one row per past time; resampled to spacing.
  static HistoryDatum from_table(const std::filesystem::path& path, const SpatialGrid& grid, double spacing,
                                 ExtensionMode mode);

  [[nodiscard]] const std::vector<Field>& samples() const noexcept { return samples_; }
  [[nodiscard]] const Field& at_zero() const { return samples_.front(); }
  [[nodiscard]] const Field& velocity_at_0() const noexcept { return velocity_; }
  [[nodiscard]] double spacing() const noexcept { return spacing_; }
  [[nodiscard]] ExtensionMode mode() const noexcept { return mode_; }
  [[nodiscard]] double support_T0() const noexcept { return spacing_ * static_cast<double>(samples_.size() - 1); }
  [[nodiscard]] const SpatialGrid& grid() const { return samples_.front().grid(); }
  /// Value assumed beyond the oldest sample.
  [[nodiscard]] Field extension() const;
  /// sup_k ||grad u0(-k ds)||_2 (the extension is included).
  [[nodiscard]] double M0() const;
  [[nodiscard]] bool is_zero() const;

  [[nodiscard]] HistoryDatum scaled(double alpha) const;
  /// Linear interpolation onto a new uniform spacing covering the same support.
  [[nodiscard]] HistoryDatum resampled(double spacing) const;

 private:
  std::vector<Field> samples_;
  double spacing_;
  ExtensionMode mode_;
  Field velocity_;
};

struct MemoryOptions {
  double s_cap = 0.0;             ///< 0 selects the kernel default
  int stride = 1;                 ///< store every stride-th recorded state
  bool fast_exponential = true;   ///< O(N) recursive sums for the exponential family
};

enum class MemoryWeight { Mu, MuPrime };

/// Quadrature of the memory term evaluated against one present field.
struct MemoryEvaluation {
  Field force;              ///< F = int mu(s) laplacian(u(t-s)) ds
  double mass = 0.0;        ///< discrete int_0^inf mu, the quadrature's k(0) - 1
  double integral_mu = 0.0;        ///< int ||grad w||^2 mu ds
  double integral_mu_prime = 0.0;  ///< int ||grad w||^2 mu' ds (<= 0)
};

/**
 * @brief Past-state buffer realising w(t,s) = u(t) - u(t-s).
 *
 * Snapshots are stored with their absolute times; the s-nodes are their ages
 * plus the node s = 0 carrying the present field. Integrals over the covered
 * depth use the trapezoid rule on those nodes, and the part beyond the oldest
 * snapshot is closed in form from the kernel tail and the extension field.
 *
 * Each snapshot owns a fixed trapezoid weight from the gaps to its stored
 * neighbours; the gap between the newest snapshot and s = 0 changes with time
 * and is applied on evaluation. For the exponential family mu(s + tau) =
 * exp(-c tau) mu(s), so weighted sums are aged in O(N) per step instead of
 * being rebuilt; only the newest snapshot is then kept in storage and no
 * truncation is needed, because the recursive sums cover the whole past.
 */
class MemoryState {
 public:
  MemoryState(const HistoryDatum& datum, const RelaxationKernel& kernel, MemoryOptions options = {});

  /// Advances the clock to t and stores u when the stride is due.
  void record(double t, const Field& u);

  [[nodiscard]] double time() const noexcept { return time_; }
  /// Number of past nodes in the quadrature (snapshots folded into recursive sums included).
  [[nodiscard]] std::size_t depth() const noexcept { return nodes_; }
  [[nodiscard]] double s_active() const;
  [[nodiscard]] double s_cap() const noexcept { return s_cap_; }
  [[nodiscard]] int stride() const noexcept { return stride_; }
  [[nodiscard]] const Field& extension() const noexcept { return extension_; }
  [[nodiscard]] const RelaxationKernel& kernel() const noexcept { return kernel_; }
  [[nodiscard]] bool uses_fast_path() const noexcept { return fast_; }
  /// Kernel mass beyond the oldest snapshot once truncation has discarded history, else 0.
  [[nodiscard]] double truncated_tail() const;

  /// Evaluates the requested quadratures against u_now in one pass.
  [[nodiscard]] MemoryEvaluation evaluate(const Field& u_now, bool want_force, bool want_integrals) const;
  /// Same quadratures by direct summation over snapshots, bypassing recursive sums.
  [[nodiscard]] MemoryEvaluation evaluate_direct(const Field& u_now, bool want_force, bool want_integrals) const;

 private:
  struct Snapshot {
    double time;
    Field u;
    double h1;
    double weight;  // trapezoid weight from gaps to stored neighbours
  };

  void push(double t, const Field& u);
  void drop_oldest();
  void accumulate(const Snapshot& snap, double weight_delta);

  RelaxationKernel kernel_;
  std::deque<Snapshot> snaps_;  // front = newest
  Field extension_;
  double time_ = 0.0;
  double oldest_time_ = 0.0;
  std::size_t nodes_ = 0;
  double s_cap_ = 0.0;
  int stride_ = 1;
  long records_ = 0;
  bool fast_ = false;
  bool truncated_ = false;

  // Exponential fast path: sums over snapshots of weight * mu(age) * {p, 1, h1(p)}.
  Field acc_field_;
  double acc_mass_ = 0.0;
  double acc_h1_ = 0.0;
};

double memory_integral(const MemoryState& state, const Field& u_now, MemoryWeight weight);
Field memory_force(const MemoryState& state, const Field& u_now);

/// Potential-well functional: quadratic part / 2 - ||v(0)||_{p+1}^{p+1} / (p+1).
double functional_I(const HistoryDatum& v, double p, const RelaxationKernel& kernel);

/// Quadratic part ||grad v(0)||^2 + int ||grad(v(0)-v(-s))||^2 mu ds of a datum.
double well_quadratic_part(const HistoryDatum& v, const RelaxationKernel& kernel);

/// Quadratic part minus ||v(0)||_{p+1}^{p+1}.
double nehari_gap(const HistoryDatum& v, double p, const RelaxationKernel& kernel);
/// Same for the translated live state u^t held by a memory buffer.
double nehari_gap(const MemoryState& state, const Field& u_now, double p);

enum class WellClass { W1, W2, OnM, OutsideWell };

const char* to_string(WellClass c);

/// Relative tolerance on |gap| / quadratic part that declares membership of the Nehari set.
inline constexpr double kNehariTolerance = 1e-8;

struct Classification {
  WellClass verdict = WellClass::W1;
  double functional = 0.0;  ///< I(v)
  double gap = 0.0;         ///< nehari_gap(v)
  double quadratic = 0.0;
};

Classification classify(const HistoryDatum& v, double p, const RelaxationKernel& kernel,
                        const WellConstants& constants);

}  // namespace viscowave
