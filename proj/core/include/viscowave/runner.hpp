#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "viscowave/blowup.hpp"
#include "viscowave/config.hpp"
#include "viscowave/simulation.hpp"
#include "viscowave/wellconst.hpp"

namespace viscowave {

/// Library version string written into every summary.
const char* version();

/// Everything produced by one executed scenario.
struct RunRecord {
  ScenarioConfig config;
  std::string hash;
  Classification initial;
  WellConstants constants;
  BlowupHypothesis hypothesis = BlowupHypothesis::None;
  BlowupVerdict verdict;
  RunOutcome outcome;
  double wall_seconds = 0.0;

  std::filesystem::path directory;
  std::filesystem::path config_path;
  std::filesystem::path ledger_path;
  std::filesystem::path summary_path;
};

/// Resolves, classifies the initial datum, integrates and runs blow-up detection.
RunRecord execute(const ScenarioConfig& config, const RunOptions& options = {});

/// VISCOWAVE_OUT when set, else "runs" under the working directory.
std::filesystem::path output_root();

/// Summary document: E(0), final E, status flags, classification, constants, verdict.
std::string summary_json(const RunRecord& record);

/**
 * Writes config.ini, ledger.csv and summary.json into root/<content hash>.
 * Refuses an existing directory unless force is set. Fills the path fields.
 */
void persist(RunRecord& record, const std::filesystem::path& root, bool force);

struct SweepAxes {
  std::vector<double> amplitudes;
  std::vector<double> m_values;
  std::vector<std::string> kernels;
};

struct SweepRow {
  double amplitude = 0.0;
  double m = 0.0;
  std::string kernel;
  double E0 = 0.0;
  WellClass initial = WellClass::W1;
  BlowupHypothesis hypothesis = BlowupHypothesis::None;
  RunStatus status = RunStatus::Completed;
  bool fired = false;
  std::optional<double> t_estimate;
  double E_final = 0.0;
};

/// Runs the Cartesian product of the axes over a base config, in axis order.
std::vector<SweepRow> sweep(const ScenarioConfig& base, const SweepAxes& axes);

/// Tab-separated verdict table with a header row.
std::string sweep_table(const std::vector<SweepRow>& rows);

}  // namespace viscowave
