#include "cli.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <viscowave/config.hpp>
#include <viscowave/decay.hpp>
#include <viscowave/error.hpp>
#include <viscowave/runner.hpp>

#include "../acceptance/acceptance.hpp"

namespace viscowave::cli {

namespace {

using json = nlohmann::ordered_json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void print_warnings(const ScenarioConfig& cfg, std::ostream& err) {
  for (const auto& w : check_config(cfg).warnings) err << "warning: " << w << '\n';
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool force, std::ostream& out,
            std::ostream& err) {
  const ScenarioConfig cfg = load_config(config_path);
  print_warnings(cfg, err);
  RunRecord rec = execute(cfg);
  persist(rec, out_dir.empty() ? output_root() : std::filesystem::path(out_dir), force);
  out << summary_json(rec) << '\n';
  err << "run directory: " << rec.directory.string() << '\n';
  return rec.outcome.status == RunStatus::Instability ? kRuntime : kOk;
}

int cmd_constants(double p, const std::string& grid_spec, const std::string& kernel_spec, bool memory,
                  std::ostream& out) {
  const SpatialGrid grid = SpatialGrid::parse(grid_spec);
  const RelaxationKernel kernel = RelaxationKernel::parse(kernel_spec);
  if (!(p > 1.0)) throw ValidationError("--p must exceed 1");
  const double k0 = memory ? kernel.k0() : 1.0;
  const WellConstants c = compute_well_constants(grid, p, k0);
  json j;
  j["grid"] = grid.spec();
  j["kernel"] = kernel.spec();
  j["p"] = p;
  j["k0"] = k0;
  j["gamma"] = c.gamma;
  j["d"] = c.d;
  j["y0"] = c.y0;
  j["M"] = optional_number(c.M);
  if (!c.M) j["M_absent_reason"] = c.M_absent_reason;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_classify(const std::string& config_path, std::optional<double> amplitude, std::ostream& out,
                 std::ostream& err) {
  ScenarioConfig cfg = load_config(config_path);
  if (amplitude) cfg.history.amplitude = *amplitude;
  validate(cfg);
  print_warnings(cfg, err);
  const ResolvedScenario sc = resolve(cfg);
  const double k0 = sc.dynamics.switches.memory ? sc.dynamics.kernel.k0() : 1.0;
  const WellConstants c = compute_well_constants(sc.grid, cfg.p, k0);
  const Classification cls = classify(sc.history, cfg.p, sc.dynamics.kernel, c);
  json j;
  j["class"] = to_string(cls.verdict);
  j["I"] = cls.functional;
  j["nehari_gap"] = cls.gap;
  j["quadratic"] = cls.quadratic;
  j["d"] = c.d;
  j["gamma"] = c.gamma;
  out << j.dump(2) << '\n';
  return kOk;
}

struct DecayFitArgs {
  std::string ledger;
  std::string model;
  std::vector<double> window;
  std::vector<std::string> predict;
};

std::optional<double> optional_token(const std::string& s) {
  if (s == "-" || s == "none") return std::nullopt;
  return std::stod(s);
}

int cmd_decay_fit(const DecayFitArgs& a, std::ostream& out) {
  const EnergyLedger ledger = EnergyLedger::read_csv(a.ledger);
  if (ledger.rows.empty()) throw ValidationError("ledger '" + a.ledger + "' has no rows");

  std::optional<RatePrediction> pred;
  if (!a.predict.empty()) {
    if (a.predict.size() != 4) throw ValidationError("--predict takes four values: m r sigma compact");
    const double m = std::stod(a.predict[0]);
    const auto r = optional_token(a.predict[1]);
    const auto sigma = optional_token(a.predict[2]);
    const std::string& compact = a.predict[3];
    const bool compact_support = compact == "1" || compact == "true" || compact == "yes";
    pred = predicted_rate(m, r ? KernelFamily::Polynomial : KernelFamily::Exponential, r, sigma, compact_support);
  }

  RateModel model = pred ? pred->kind : RateModel::Exponential;
  if (a.model == "exp" || a.model == "exponential") model = RateModel::Exponential;
  else if (a.model == "poly" || a.model == "polynomial") model = RateModel::Polynomial;
  else if (!a.model.empty()) throw ValidationError("--model must be exp or poly");

  const double t_end = ledger.rows.back().t;
  double lo = 0.5 * t_end, hi = t_end;
  if (!a.window.empty()) {
    if (a.window.size() != 2 || !(a.window[0] < a.window[1])) throw ValidationError("--window takes t_lo < t_hi");
    lo = a.window[0];
    hi = a.window[1];
  }
  const RateFit fit = fit_rate(ledger, lo, hi, model);

  json j;
  j["model"] = to_string(model);
  j["window"] = {lo, hi};
  j["fitted_rate"] = fit.rate;
  j["goodness"] = fit.goodness;
  j["rows_used"] = fit.rows_used;
  if (pred) {
    j["predicted"] = {{"case", pred->decay_case}, {"kind", to_string(pred->kind)}, {"exponent", pred->exponent}};
    bool consistent = fit.rate > 0.0;
    if (pred->kind == RateModel::Polynomial && model == RateModel::Polynomial) consistent = fit.rate >= pred->exponent;
    j["verdict"] = consistent ? "consistent" : "slower_than_predicted";
  } else {
    j["predicted"] = nullptr;
    j["verdict"] = fit.rate > 0.0 ? "decaying" : "not_decaying";
  }
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_sweep(const std::string& config_path, const SweepAxes& axes, std::ostream& out, std::ostream& err) {
  const ScenarioConfig base = load_config(config_path);
  print_warnings(base, err);
  out << sweep_table(sweep(base, axes));
  return kOk;
}

int cmd_verify(bool quick, std::uint64_t seed, std::ostream& out) {
  acceptance::Options opt;
  opt.seed = seed;
  opt.progress = &out;
  if (quick) out << "quick mode: the suite already fits the time budget, all criteria run\n";
  const auto results = acceptance::run_all(opt);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  out << (failed == 0 ? "acceptance: all " : "acceptance: ") << (failed == 0 ? results.size() : failed)
      << (failed == 0 ? " criteria passed" : " criteria failed") << '\n';
  return failed == 0 ? kOk : kAcceptance;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Viscoelastic wave simulator with fading memory, nonlinear damping and source"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool force = false;
  auto* run = app.add_subcommand("run", "Run one scenario and persist its ledger and summary");
  run->add_option("--config", config_path, "Scenario INI file")->required();
  run->add_option("--out", out_dir, "Output root (default: $VISCOWAVE_OUT or ./runs)");
  run->add_flag("--force", force, "Overwrite an existing run directory");

  double p = 3.0;
  std::string grid_spec = "1d:pi:200", kernel_spec = "exp:1:1";
  bool no_memory = false;
  auto* constants = app.add_subcommand("constants", "Print the Sobolev constant and well thresholds as JSON");
  constants->add_option("--p", p, "Source exponent");
  constants->add_option("--grid", grid_spec, "Grid spec");
  constants->add_option("--kernel", kernel_spec, "Kernel spec");
  constants->add_flag("--no-memory", no_memory, "Use k0 = 1");

  std::optional<double> amplitude;
  auto* cls = app.add_subcommand("classify", "Classify the history datum of a scenario");
  cls->add_option("--config", config_path, "Scenario INI file")->required();
  cls->add_option("--amplitude", amplitude, "Override history amplitude");

  DecayFitArgs fit;
  auto* decay = app.add_subcommand("decay-fit", "Fit a decay rate to a ledger CSV");
  decay->add_option("ledger", fit.ledger, "Ledger CSV")->required();
  decay->add_option("--model", fit.model, "exp or poly");
  decay->add_option("--window", fit.window, "t_lo t_hi")->expected(2);
  decay->add_option("--predict", fit.predict, "m r sigma compact ('-' for absent)")->expected(4);

  SweepAxes axes;
  auto* sw = app.add_subcommand("sweep", "Run amplitude x m x kernel grid and print a verdict table");
  sw->add_option("--config", config_path, "Base scenario INI file")->required();
  sw->add_option("--amplitudes", axes.amplitudes, "Amplitudes")->delimiter(',');
  sw->add_option("--m", axes.m_values, "Damping exponents")->delimiter(',');
  sw->add_option("--kernels", axes.kernels, "Kernel specs")->delimiter(',');

  bool quick = false;
  std::uint64_t seed = acceptance::Options{}.seed;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_flag("--quick", quick, "Same criteria and tolerances");
  verify->add_option("--seed", seed, "Seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, force, out, err);
    if (*constants) return cmd_constants(p, grid_spec, kernel_spec, !no_memory, out);
    if (*cls) return cmd_classify(config_path, amplitude, out, err);
    if (*decay) return cmd_decay_fit(fit, out);
    if (*sw) return cmd_sweep(config_path, axes, out, err);
    if (*verify) return cmd_verify(quick, seed, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kRuntime;
  }
  return kValidation;
}

}  // namespace viscowave::cli
