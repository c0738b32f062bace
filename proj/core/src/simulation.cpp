#include "viscowave/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "viscowave/error.hpp"

namespace viscowave {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed:
      return "completed";
    case RunStatus::ControllerExhausted:
      return "controller_exhausted";
    case RunStatus::Instability:
      return "instability";
  }
  return "?";
}

RunOutcome simulate(const ScenarioConfig& config, const RunOptions& options) {
  return simulate(resolve(config), config, options);
}

RunOutcome simulate(const ResolvedScenario& scenario, const ScenarioConfig& config, const RunOptions& options) {
  const Dynamics& dyn = scenario.dynamics;
  RunOutcome out;
  out.dt0 = scenario.dt;

  SimState state = make_initial_state(scenario.history, dyn, scenario.dt, scenario.memory);
  if (options.keep_trajectory) out.trajectory = Trajectory{scenario.history, dyn, {}};

  const double t_end = config.t_end;
  double damp_cum = 0.0;
  double visc_cum = 0.0;
  double E0 = 0.0;

  auto emit = [&](const SimState& s) {
    out.ledger.rows.push_back(make_row(s, dyn, damp_cum, visc_cum, E0));
    if (out.trajectory) out.trajectory->frames.push_back({s.t, s.u, s.v});
  };
  E0 = make_row(state, dyn, 0.0, 0.0, 0.0).E;
  emit(state);

  const LedgerRow& row0 = out.ledger.rows.front();
  double grad_ref = std::max(row0.grad_norm, std::sqrt(2.0 * row0.scriptE));
  DissipationRates rates = dissipation_rates(state, dyn);
  long since_output = 0;
  const double t_tol = 1e-9 * scenario.dt;

  try {
    while (state.t < t_end - t_tol) {
      const double nominal = state.dt;
      const double t_before = state.t;
      const bool last = t_end - state.t <= nominal + t_tol;
      if (last) state.dt = t_end - state.t;
      step(state, dyn);
      state.dt = nominal;
      if (last) state.t = t_end;
      ++out.steps;

      const DissipationRates next = dissipation_rates(state, dyn);
      const DissipationRates inc = dissipation_increment(rates, next, state.t - t_before);
      damp_cum += inc.damp;
      visc_cum += inc.visc;
      rates = next;
      out.max_truncated_tail = std::max(out.max_truncated_tail, state.memory.truncated_tail());

      bool stop = false;
      if (config.blowup_control) {
        const double grad = std::sqrt(h1_seminorm_sq(state.u));
        if (grad >= 2.0 * grad_ref) {
          grad_ref = grad;
          if (out.halvings >= kMaxHalvings) {
            out.status = RunStatus::ControllerExhausted;
            out.message = "step controller exhausted at t = " + std::to_string(state.t);
            stop = true;
          } else {
            ++out.halvings;
            state.dt *= 0.5;
          }
        }
      }

      ++since_output;
      if (stop || since_output >= config.output_every || out.halvings > 0 || state.t >= t_end - t_tol) {
        emit(state);
        since_output = 0;
      }
      if (stop) break;
    }
  } catch (const BlowupOrInstability& e) {
    out.status = RunStatus::Instability;
    out.message = e.what();
  }
  out.dt_final = state.dt;
  return out;
}

}  // namespace viscowave
