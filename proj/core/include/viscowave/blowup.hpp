#pragma once

#include <optional>
#include <string>

#include "viscowave/energetics.hpp"
#include "viscowave/history.hpp"
#include "viscowave/wellconst.hpp"

namespace viscowave {

/// Which sufficient condition for finite-time blow-up the initial data meets.
enum class BlowupHypothesis { NegativeEnergy, PositiveEnergyWindow, W2Well, None };

const char* to_string(BlowupHypothesis h);

struct HypothesisInputs {
  double m = 1.0;
  double p = 3.0;
  double k0 = 1.0;
  WellClass initial_class = WellClass::W1;
};

/**
 * Checked in order: NegativeEnergy (E(0) < 0), W2Well (u0 in W2 with
 * 0 <= E(0) < M), PositiveEnergyWindow (0 <= E(0) < M and scriptE(0) > y0).
 * All three also require p > max(m, sqrt(k0)).
 */
BlowupHypothesis check_hypotheses(const HypothesisInputs& in, const WellConstants& constants, const LedgerRow& row0);

struct BlowupVerdict {
  bool fired = false;
  std::optional<double> t_estimate;
  double peak_grad = 0.0;
  double threshold = 0.0;  ///< 1e3 ||grad u(0)|| + 1
  bool controller_exhausted = false;
  BlowupHypothesis hypothesis = BlowupHypothesis::None;
};

/// Operational definition of blow-up used by detect.
inline constexpr const char* kBlowupDefinition =
    "fired when max ||grad u|| exceeds 1e3 ||grad u(0)|| + 1 and the step controller reached dt0/2^10; "
    "t_estimate is the zero of a least-squares line through 1/||grad u|| over the last doubling";

/// Zero of the least-squares line of 1/grad_norm against t over the trailing rows within a factor 2 of the last.
std::optional<double> estimate_blowup_time(const EnergyLedger& ledger);

BlowupVerdict detect(const EnergyLedger& ledger, bool controller_exhausted,
                     BlowupHypothesis hypothesis = BlowupHypothesis::None);

}  // namespace viscowave
