#pragma once

#include <optional>
#include <string>

#include "viscowave/config.hpp"
#include "viscowave/energetics.hpp"

namespace viscowave {

enum class RunStatus {
  Completed,            ///< reached t_end
  ControllerExhausted,  ///< step controller hit its minimum step while the gradient kept doubling
  Instability,          ///< non-finite state
};

const char* to_string(RunStatus s);

struct RunOptions {
  bool keep_trajectory = false;  ///< store (u, v) at every emitted row
};

struct RunOutcome {
  EnergyLedger ledger;
  std::optional<Trajectory> trajectory;
  RunStatus status = RunStatus::Completed;
  std::string message;
  double dt0 = 0.0;
  double dt_final = 0.0;
  int halvings = 0;
  long steps = 0;
  double max_truncated_tail = 0.0;

  [[nodiscard]] bool controller_exhausted() const { return status == RunStatus::ControllerExhausted; }
};

/// Maximum number of step halvings of the blow-up controller.
inline constexpr int kMaxHalvings = 10;

/**
 * Integrates a resolved scenario up to t_end.
 *
 * A row is emitted every output_every steps, at t_end, and at every step
 * once the controller has shrunk dt. The controller halves dt whenever
 * ||grad u|| reaches twice its reference (initially the larger of
 * ||grad u(0)|| and sqrt(2 scriptE(0))), and stops the run when a further
 * halving would go below dt0 / 2^kMaxHalvings. Non-finite states end the run
 * with the ledger built so far.
 */
RunOutcome simulate(const ResolvedScenario& scenario, const ScenarioConfig& config, const RunOptions& options = {});
RunOutcome simulate(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace viscowave
