#include "viscowave/blowup.hpp"

#include <algorithm>
#include <cmath>

namespace viscowave {

const char* to_string(BlowupHypothesis h) {
  switch (h) {
    case BlowupHypothesis::NegativeEnergy:
      return "NegativeEnergy";
    case BlowupHypothesis::PositiveEnergyWindow:
      return "PositiveEnergyWindow";
    case BlowupHypothesis::W2Well:
      return "W2Well";
    case BlowupHypothesis::None:
      return "None";
  }
  return "?";
}

BlowupHypothesis check_hypotheses(const HypothesisInputs& in, const WellConstants& constants, const LedgerRow& row0) {
  const bool dominant = in.p > std::max(in.m, std::sqrt(in.k0));
  if (!dominant) return BlowupHypothesis::None;
  const double E0 = row0.E;
  if (E0 < 0.0) return BlowupHypothesis::NegativeEnergy;
  const bool window = constants.M && E0 >= 0.0 && E0 < *constants.M;
  if (window && in.initial_class == WellClass::W2) return BlowupHypothesis::W2Well;
  if (window && row0.scriptE > constants.y0) return BlowupHypothesis::PositiveEnergyWindow;
  return BlowupHypothesis::None;
}

std::optional<double> estimate_blowup_time(const EnergyLedger& ledger) {
  const auto& rows = ledger.rows;
  if (rows.size() < 2) return std::nullopt;
  const double last = rows.back().grad_norm;
  if (!(last > 0.0) || !std::isfinite(last)) return std::nullopt;
  std::size_t first = rows.size() - 1;
  while (first > 0 && rows[first - 1].grad_norm >= 0.5 * last) --first;
  first = std::min(first, rows.size() - 2);

  double n = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t j = first; j < rows.size(); ++j) {
    mx += rows[j].t;
    my += 1.0 / rows[j].grad_norm;
    n += 1.0;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = first; j < rows.size(); ++j) {
    sxx += (rows[j].t - mx) * (rows[j].t - mx);
    sxy += (rows[j].t - mx) * (1.0 / rows[j].grad_norm - my);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) return std::nullopt;
  return mx - my / slope;
}

BlowupVerdict detect(const EnergyLedger& ledger, bool controller_exhausted, BlowupHypothesis hypothesis) {
  BlowupVerdict v;
  v.hypothesis = hypothesis;
  v.controller_exhausted = controller_exhausted;
  if (ledger.rows.empty()) return v;
  v.threshold = 1e3 * ledger.rows.front().grad_norm + 1.0;
  for (const LedgerRow& r : ledger.rows) v.peak_grad = std::max(v.peak_grad, r.grad_norm);
  v.fired = controller_exhausted && v.peak_grad > v.threshold;
  if (v.fired) v.t_estimate = estimate_blowup_time(ledger);
  return v;
}

}  // namespace viscowave
