#include "viscowave/history.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "parse_util.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

// ---------------------------------------------------------------------------
// HistoryDatum

HistoryDatum::HistoryDatum(std::vector<Field> samples, double spacing, ExtensionMode mode, Field velocity_at_0)
    : samples_(std::move(samples)), spacing_(spacing), mode_(mode), velocity_(std::move(velocity_at_0)) {
  if (samples_.empty()) throw ValidationError("history datum needs at least the t = 0 sample");
  if (samples_.size() > 1 && !(spacing_ > 0.0)) throw ValidationError("history sample spacing must be positive");
  for (const Field& f : samples_) {
    require_same_grid(samples_.front(), f);
    if (!f.all_finite()) throw ValidationError("history samples must be finite");
  }
  require_same_grid(samples_.front(), velocity_);
}

HistoryDatum HistoryDatum::constant(const Field& u) {
  return HistoryDatum({u}, 0.0, ExtensionMode::Frozen, Field(u.grid()));
}

HistoryDatum HistoryDatum::from_profile(const Field& shape, TemporalProfile profile, double support, double rate,
                                        ExtensionMode mode, double spacing) {
  if (!(support >= 0.0)) throw ValidationError("history support must be >= 0");
  if (!(spacing > 0.0)) throw ValidationError("history spacing must be positive");
  if (profile == TemporalProfile::Bump && !(support > 0.0)) throw ValidationError("bump profile needs support > 0");

  auto b = [&](double t) {
    switch (profile) {
      case TemporalProfile::Constant:
        return 1.0;
      case TemporalProfile::ExpRamp:
        return std::exp(rate * t);
      case TemporalProfile::Bump:
        return t < -support ? 0.0 : 0.5 * (1.0 + std::cos(std::numbers::pi * t / support));
    }
    return 0.0;
  };

  const auto count = static_cast<std::size_t>(std::llround(support / spacing));
  std::vector<Field> samples;
  samples.reserve(count + 1);
  for (std::size_t k = 0; k <= count; ++k) samples.push_back(b(-static_cast<double>(k) * spacing) * shape);
  const double slope = profile == TemporalProfile::ExpRamp ? rate : 0.0;
  return HistoryDatum(std::move(samples), spacing, mode, slope * shape);
}

HistoryDatum HistoryDatum::from_table(const std::filesystem::path& path, const SpatialGrid& grid, double spacing,
                                      ExtensionMode mode) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open history table '" + path.string() + "'");
  std::vector<std::pair<double, Field>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cells = detail::split(trimmed, ',');
    double t = 0.0;
    try {
      t = detail::parse_real(cells[0]);
    } catch (const ValidationError&) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw;
    }
    first = false;
    if (cells.size() != grid.size() + 1) throw ValidationError("history table row has wrong number of node values");
    if (t > 0.0) throw ValidationError("history table times must be <= 0");
    Field f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = detail::parse_real(cells[i + 1]);
    rows.emplace_back(t, std::move(f));
  }
  if (rows.empty()) throw ValidationError("history table is empty");
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (rows.front().first != 0.0) throw ValidationError("history table must contain t = 0");

  Field velocity(grid);
  if (rows.size() > 1) {
    velocity = (1.0 / (rows[0].first - rows[1].first)) * (rows[0].second - rows[1].second);
  }
  if (rows.size() == 1) return HistoryDatum({rows.front().second}, spacing, mode, velocity);

  // Resample linearly onto the uniform spacing.
  const double t_min = rows.back().first;
  const auto count = static_cast<std::size_t>(std::floor(-t_min / spacing + 1e-9));
  std::vector<Field> samples;
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= count; ++k) {
    const double t = -static_cast<double>(k) * spacing;
    while (seg + 2 < rows.size() && rows[seg + 1].first > t) ++seg;
    const auto& [ta, fa] = rows[seg];
    const auto& [tb, fb] = rows[seg + 1];
    const double w = std::clamp((ta - t) / (ta - tb), 0.0, 1.0);
    samples.push_back((1.0 - w) * fa + w * fb);
  }
  return HistoryDatum(std::move(samples), spacing, mode, velocity);
}

Field HistoryDatum::extension() const {
  if (mode_ == ExtensionMode::Frozen) return samples_.back();
  return Field(grid());
}

double HistoryDatum::M0() const {
  double sup = 0.0;
  for (const Field& f : samples_) sup = std::max(sup, h1_seminorm_sq(f));
  return std::sqrt(sup);
}

bool HistoryDatum::is_zero() const {
  return std::all_of(samples_.begin(), samples_.end(), [](const Field& f) { return f.is_zero(); });
}

HistoryDatum HistoryDatum::scaled(double alpha) const {
  std::vector<Field> s;
  s.reserve(samples_.size());
  for (const Field& f : samples_) s.push_back(alpha * f);
  return HistoryDatum(std::move(s), spacing_, mode_, alpha * velocity_);
}

HistoryDatum HistoryDatum::resampled(double spacing) const {
  if (!(spacing > 0.0)) throw ValidationError("history spacing must be positive");
  if (samples_.size() == 1) return HistoryDatum(samples_, spacing, mode_, velocity_);
  const double support = support_T0();
  const auto count = static_cast<std::size_t>(std::llround(support / spacing));
  std::vector<Field> s;
  s.reserve(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    const double pos = std::min(static_cast<double>(k) * spacing / spacing_, static_cast<double>(samples_.size() - 1));
    const auto lo = std::min(static_cast<std::size_t>(pos), samples_.size() - 2);
    const double w = pos - static_cast<double>(lo);
    s.push_back((1.0 - w) * samples_[lo] + w * samples_[lo + 1]);
  }
  return HistoryDatum(std::move(s), spacing, mode_, velocity_);
}

// ---------------------------------------------------------------------------
// MemoryState

MemoryState::MemoryState(const HistoryDatum& datum, const RelaxationKernel& kernel, MemoryOptions options)
    : kernel_(kernel), extension_(datum.extension()), stride_(std::max(1, options.stride)) {
  s_cap_ = options.s_cap > 0.0 ? options.s_cap
           : kernel.family() == KernelFamily::Exponential ? 50.0 / kernel.c()
                                                          : kernel.depth_for_tail_fraction(1e-10);
  fast_ = options.fast_exponential && kernel.family() == KernelFamily::Exponential;
  acc_field_ = Field(datum.grid());

  const auto& samples = datum.samples();
  const double ds = datum.spacing();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double weight = 0.0;
    if (samples.size() > 1) weight = (k == 0 || k + 1 == samples.size()) ? 0.5 * ds : ds;
    snaps_.push_back({-static_cast<double>(k) * ds, samples[k], h1_seminorm_sq(samples[k]), weight});
  }
  nodes_ = snaps_.size();
  oldest_time_ = snaps_.back().time;
  if (fast_) {
    for (const Snapshot& s : snaps_) accumulate(s, s.weight);
    snaps_.resize(1);
  }
  while (!fast_ && snaps_.size() > 1 && time_ - snaps_.back().time > s_cap_) drop_oldest();
}

void MemoryState::accumulate(const Snapshot& snap, double weight_delta) {
  if (!fast_ || weight_delta == 0.0) return;
  const double m = kernel_.mu(time_ - snap.time) * weight_delta;
  acc_field_.axpy(m, snap.u);
  acc_mass_ += m;
  acc_h1_ += m * snap.h1;
}

void MemoryState::push(double t, const Field& u) {
  Snapshot& newest = snaps_.front();
  const double gap = t - newest.time;
  if (!(gap > 0.0)) return;
  newest.weight += 0.5 * gap;
  accumulate(newest, 0.5 * gap);
  snaps_.push_front({t, u, h1_seminorm_sq(u), 0.5 * gap});
  accumulate(snaps_.front(), 0.5 * gap);
  ++nodes_;
  if (fast_) snaps_.resize(1);
}

void MemoryState::drop_oldest() {
  Snapshot& oldest = snaps_.back();
  Snapshot& next = snaps_[snaps_.size() - 2];
  const double half_gap = 0.5 * (next.time - oldest.time);
  accumulate(oldest, -oldest.weight);
  accumulate(next, -half_gap);
  next.weight -= half_gap;
  snaps_.pop_back();
  oldest_time_ = snaps_.back().time;
  --nodes_;
  truncated_ = true;
}

void MemoryState::record(double t, const Field& u) {
  if (t < time_) throw ValidationError("memory clock cannot run backwards");
  require_same_grid(u, extension_);
  if (fast_ && t > time_) {
    const double factor = std::exp(-kernel_.c() * (t - time_));
    acc_field_ *= factor;
    acc_mass_ *= factor;
    acc_h1_ *= factor;
  }
  time_ = t;
  ++records_;
  if (records_ % stride_ == 0) push(t, u);
  while (!fast_ && snaps_.size() > 1 && time_ - snaps_.back().time > s_cap_) drop_oldest();
}

double MemoryState::s_active() const { return time_ - oldest_time_; }

double MemoryState::truncated_tail() const { return truncated_ ? kernel_.tail_mass(s_active()) : 0.0; }

MemoryEvaluation MemoryState::evaluate(const Field& u_now, bool want_force, bool want_integrals) const {
  if (!fast_) return evaluate_direct(u_now, want_force, want_integrals);
  require_same_grid(u_now, extension_);

  const Snapshot& newest = snaps_.front();
  const double g0 = time_ - newest.time;
  const double node0 = 0.5 * g0 * kernel_.mu(0.0);
  const double newest_extra = 0.5 * g0 * kernel_.mu(g0);
  const double s_last = s_active();
  const double tail = kernel_.tail_mass(s_last);

  MemoryEvaluation out;
  out.mass = acc_mass_ + newest_extra + node0 + tail;

  if (want_force) {
    Field source = acc_field_;
    source.axpy(newest_extra, newest.u);
    source.axpy(node0, u_now);
    source.axpy(tail, extension_);
    out.force = laplacian(source);
  }
  if (want_integrals) {
    Field weighted = acc_field_;
    weighted.axpy(newest_extra, newest.u);
    const double mass = acc_mass_ + newest_extra;
    const double h1_sum = acc_h1_ + newest_extra * newest.h1;
    const double snapshots =
        std::max(0.0, mass * h1_seminorm_sq(u_now) - 2.0 * h1_inner(u_now, weighted) + h1_sum);
    const double beyond = h1_seminorm_sq(u_now - extension_);
    out.integral_mu = snapshots + tail * beyond;
    out.integral_mu_prime = -kernel_.c() * snapshots - kernel_.mu(s_last) * beyond;
  }
  return out;
}

MemoryEvaluation MemoryState::evaluate_direct(const Field& u_now, bool want_force, bool want_integrals) const {
  if (fast_) throw ValidationError("direct memory evaluation needs a buffer built without the fast path");
  require_same_grid(u_now, extension_);
  const double g0 = time_ - snaps_.front().time;
  const double node0 = 0.5 * g0 * kernel_.mu(0.0);

  MemoryEvaluation out;
  Field source(u_now.grid());
  Field diff(u_now.grid());
  if (want_force) source.axpy(node0, u_now);
  out.mass = node0;

  bool first = true;
  for (const Snapshot& snap : snaps_) {
    const double age = time_ - snap.time;
    const double weight = snap.weight + (first ? 0.5 * g0 : 0.0);
    first = false;
    const double m = weight * kernel_.mu(age);
    out.mass += m;
    if (want_force) source.axpy(m, snap.u);
    if (want_integrals) {
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u_now[i] - snap.u[i];
      const double h = h1_seminorm_sq(diff);
      out.integral_mu += m * h;
      out.integral_mu_prime += weight * kernel_.mu_prime(age) * h;
    }
  }

  const double s_last = s_active();
  const double tail = kernel_.tail_mass(s_last);
  out.mass += tail;
  if (want_force) {
    source.axpy(tail, extension_);
    out.force = laplacian(source);
  }
  if (want_integrals) {
    const double beyond = h1_seminorm_sq(u_now - extension_);
    out.integral_mu += tail * beyond;
    out.integral_mu_prime -= kernel_.mu(s_last) * beyond;
  }
  return out;
}

double memory_integral(const MemoryState& state, const Field& u_now, MemoryWeight weight) {
  const auto eval = state.evaluate(u_now, false, true);
  return weight == MemoryWeight::Mu ? eval.integral_mu : eval.integral_mu_prime;
}

Field memory_force(const MemoryState& state, const Field& u_now) {
  return state.evaluate(u_now, true, false).force;
}

// ---------------------------------------------------------------------------
// Potential well

double well_quadratic_part(const HistoryDatum& v, const RelaxationKernel& kernel) {
  const MemoryState state(v, kernel);
  return h1_seminorm_sq(v.at_zero()) + memory_integral(state, v.at_zero(), MemoryWeight::Mu);
}

double functional_I(const HistoryDatum& v, double p, const RelaxationKernel& kernel) {
  return 0.5 * well_quadratic_part(v, kernel) - lp_norm_pow(v.at_zero(), p + 1.0) / (p + 1.0);
}

double nehari_gap(const HistoryDatum& v, double p, const RelaxationKernel& kernel) {
  return well_quadratic_part(v, kernel) - lp_norm_pow(v.at_zero(), p + 1.0);
}

double nehari_gap(const MemoryState& state, const Field& u_now, double p) {
  return h1_seminorm_sq(u_now) + memory_integral(state, u_now, MemoryWeight::Mu) - lp_norm_pow(u_now, p + 1.0);
}

const char* to_string(WellClass c) {
  switch (c) {
    case WellClass::W1:
      return "W1";
    case WellClass::W2:
      return "W2";
    case WellClass::OnM:
      return "OnM";
    case WellClass::OutsideWell:
      return "OutsideWell";
  }
  return "?";
}

Classification classify(const HistoryDatum& v, double p, const RelaxationKernel& kernel,
                        const WellConstants& constants) {
  Classification c;
  c.quadratic = well_quadratic_part(v, kernel);
  const double power = lp_norm_pow(v.at_zero(), p + 1.0);
  c.gap = c.quadratic - power;
  c.functional = 0.5 * c.quadratic - power / (p + 1.0);

  if (v.is_zero()) {
    c.verdict = WellClass::W1;
  } else if (std::abs(c.gap) <= kNehariTolerance * c.quadratic) {
    // The Nehari set sits at level >= d; floating point cannot place it strictly inside or outside.
    c.verdict = WellClass::OnM;
  } else if (c.functional >= constants.d) {
    c.verdict = WellClass::OutsideWell;
  } else {
    c.verdict = c.gap > 0.0 ? WellClass::W1 : WellClass::W2;
  }
  return c;
}

}  // namespace viscowave
