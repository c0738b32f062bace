#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "viscowave/history.hpp"
#include "viscowave/integrator.hpp"

namespace viscowave {

enum class HistoryShape { Sine, GroundState };

/// Analytic template or CSV table describing u0 on t <= 0.
struct HistorySpec {
  ExtensionMode mode = ExtensionMode::Zero;
  TemporalProfile profile = TemporalProfile::Constant;
  HistoryShape shape = HistoryShape::Sine;
  double amplitude = 0.1;
  std::vector<int> modes{1};
  double support = 0.0;
  double rate = 0.0;
  std::string table;  ///< CSV path; overrides the analytic template when non-empty

  bool operator==(const HistorySpec&) const = default;
};

/// Every input of one simulation. Sections of the INI file are noted per group.
struct ScenarioConfig {
  // [grid], [kernel]
  std::string grid = "1d:pi:200";
  std::string kernel = "exp:1:1";
  // [history]
  HistorySpec history;
  // [integrator]
  double m = 1.0;
  double p = 3.0;
  std::optional<double> dt;  ///< empty selects the largest stable step dividing t_end
  double t_end = 20.0;
  double cfl_safety = 0.5;
  int output_every = 1;
  int stride = 1;
  double s_cap = 0.0;
  std::uint64_t seed = 0;
  bool dim3_semantics = false;
  StepSwitches switches;
  bool blowup_control = true;
  // [decay]
  double window_lo = 0.5;  ///< fit window as fractions of t_end
  double window_hi = 1.0;
  double t_reiter = 1.0;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Result of validation: hard errors and warnings, each as one line.
struct ConfigIssues {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

ConfigIssues check_config(const ScenarioConfig& config);
/// Throws ValidationError listing every error when check_config reports any.
void validate(const ScenarioConfig& config);

/// INI text with sections [grid] [kernel] [history] [integrator] [decay]; unknown keys are errors.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string config_to_string(const ScenarioConfig& config);
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

/// Hex SHA-256 of the canonical serialisation.
std::string content_hash(const ScenarioConfig& config);

/// Inputs of a run after parsing every spec string of the config.
struct ResolvedScenario {
  SpatialGrid grid;
  Dynamics dynamics;
  HistoryDatum history;
  double dt = 0.0;
  MemoryOptions memory;
};

ResolvedScenario resolve(const ScenarioConfig& config);

/// Builds the history datum described by spec at the given sample spacing.
HistoryDatum make_history(const HistorySpec& spec, const SpatialGrid& grid, double p, double spacing);

}  // namespace viscowave
