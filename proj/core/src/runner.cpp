#include "viscowave/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "parse_util.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

const char* version() { return "0.1.0"; }

RunRecord execute(const ScenarioConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.config = config;
  rec.hash = content_hash(config);

  const ResolvedScenario scenario = resolve(config);
  const Dynamics& dyn = scenario.dynamics;
  const double k0 = dyn.switches.memory ? dyn.kernel.k0() : 1.0;
  rec.constants = compute_well_constants(scenario.grid, config.p, k0);
  rec.initial = classify(scenario.history, config.p, dyn.kernel, rec.constants);
  rec.outcome = simulate(scenario, config, options);

  rec.hypothesis = check_hypotheses({config.m, config.p, k0, rec.initial.verdict}, rec.constants,
                                    rec.outcome.ledger.rows.front());
  rec.verdict = detect(rec.outcome.ledger, rec.outcome.controller_exhausted(), rec.hypothesis);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::filesystem::path output_root() {
  if (const char* env = std::getenv("VISCOWAVE_OUT"); env && *env) return env;
  return "runs";
}

std::string summary_json(const RunRecord& r) {
  using nlohmann::ordered_json;
  const auto& rows = r.outcome.ledger.rows;
  ordered_json j;
  j["version"] = version();
  j["config_hash"] = r.hash;
  j["E0"] = rows.empty() ? 0.0 : rows.front().E;
  j["E_final"] = rows.empty() ? 0.0 : rows.back().E;
  j["t_final"] = rows.empty() ? 0.0 : rows.back().t;
  j["status"] = to_string(r.outcome.status);
  j["message"] = r.outcome.message;
  j["flags"] = {{"blowup", r.verdict.fired},
                {"controller_exhausted", r.outcome.controller_exhausted()},
                {"monotone", monotonicity_check(r.outcome.ledger).ok}};
  j["steps"] = r.outcome.steps;
  j["dt0"] = r.outcome.dt0;
  j["dt_final"] = r.outcome.dt_final;
  j["halvings"] = r.outcome.halvings;
  j["max_truncated_tail"] = r.outcome.max_truncated_tail;
  j["classification"] = {{"verdict", to_string(r.initial.verdict)},
                         {"functional_I", r.initial.functional},
                         {"nehari_gap", r.initial.gap},
                         {"quadratic_part", r.initial.quadratic}};
  ordered_json c = {{"gamma", r.constants.gamma},
                    {"d", r.constants.d},
                    {"y0", r.constants.y0},
                    {"p", r.constants.p},
                    {"k0", r.constants.k0},
                    {"grid", r.constants.grid_fingerprint}};
  if (r.constants.M) c["M"] = *r.constants.M;
  else c["M_absent_reason"] = r.constants.M_absent_reason;
  j["constants"] = c;
  ordered_json v = {{"fired", r.verdict.fired},
                    {"peak_grad", r.verdict.peak_grad},
                    {"threshold", r.verdict.threshold},
                    {"hypothesis", to_string(r.verdict.hypothesis)},
                    {"definition", kBlowupDefinition}};
  v["t_estimate"] = r.verdict.t_estimate ? ordered_json(*r.verdict.t_estimate) : ordered_json(nullptr);
  j["blowup"] = v;
  j["wall_seconds"] = r.wall_seconds;
  return j.dump(2) + "\n";
}

void persist(RunRecord& record, const std::filesystem::path& root, bool force) {
  namespace fs = std::filesystem;
  const fs::path dir = root / record.hash;
  if (fs::exists(dir) && !force) {
    throw ValidationError("run directory '" + dir.string() + "' exists; pass --force to overwrite");
  }
  fs::create_directories(dir);
  record.directory = dir;
  record.config_path = dir / "config.ini";
  record.ledger_path = dir / "ledger.csv";
  record.summary_path = dir / "summary.json";
  save_config(record.config, record.config_path);
  record.outcome.ledger.write_csv(record.ledger_path);
  std::ofstream(record.summary_path, std::ios::binary) << summary_json(record);
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, const SweepAxes& axes) {
  const std::vector<double> amps = axes.amplitudes.empty() ? std::vector{base.history.amplitude} : axes.amplitudes;
  const std::vector<double> ms = axes.m_values.empty() ? std::vector{base.m} : axes.m_values;
  const std::vector<std::string> ks = axes.kernels.empty() ? std::vector{base.kernel} : axes.kernels;
  std::vector<SweepRow> rows;
  for (const auto& kernel : ks) {
    for (double m : ms) {
      for (double a : amps) {
        ScenarioConfig cfg = base;
        cfg.kernel = kernel;
        cfg.m = m;
        cfg.history.amplitude = a;
        const RunRecord rec = execute(cfg);
        SweepRow row;
        row.amplitude = a;
        row.m = m;
        row.kernel = kernel;
        row.E0 = rec.outcome.ledger.rows.front().E;
        row.E_final = rec.outcome.ledger.rows.back().E;
        row.initial = rec.initial.verdict;
        row.hypothesis = rec.hypothesis;
        row.status = rec.outcome.status;
        row.fired = rec.verdict.fired;
        row.t_estimate = rec.verdict.t_estimate;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
  using detail::format_real;
  std::ostringstream o;
  o << "kernel\tm\tamplitude\tE0\tinitial\thypothesis\tstatus\tfired\tt_estimate\tE_final\n";
  for (const auto& r : rows) {
    o << r.kernel << '\t' << format_real(r.m) << '\t' << format_real(r.amplitude) << '\t' << format_real(r.E0)
      << '\t' << to_string(r.initial) << '\t' << to_string(r.hypothesis) << '\t' << to_string(r.status) << '\t'
      << (r.fired ? "yes" : "no") << '\t' << (r.t_estimate ? format_real(*r.t_estimate) : "-") << '\t'
      << format_real(r.E_final) << '\n';
  }
  return o.str();
}

}  // namespace viscowave
