#include "viscowave/config.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "parse_util.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

namespace pt = boost::property_tree;

namespace {

const char* to_token(ExtensionMode m) { return m == ExtensionMode::Zero ? "zero" : "frozen"; }

const char* to_token(TemporalProfile p) {
  switch (p) {
    case TemporalProfile::Constant:
      return "constant";
    case TemporalProfile::ExpRamp:
      return "exp_ramp";
    case TemporalProfile::Bump:
      return "bump";
  }
  return "?";
}

const char* to_token(HistoryShape s) { return s == HistoryShape::Sine ? "sine" : "ground_state"; }

const char* to_token(bool b) { return b ? "true" : "false"; }

std::string join_modes(const std::vector<int>& modes) {
  std::string out;
  for (std::size_t i = 0; i < modes.size(); ++i) out += (i ? "," : "") + std::to_string(modes[i]);
  return out;
}

// Applies one setter per recognised key and collects every failure.
class Reader {
 public:
  using Setter = std::function<void(std::string_view)>;

  void on(const std::string& section, const std::string& key, Setter setter) {
    setters_[section + "." + key] = std::move(setter);
  }

  void apply(const pt::ptree& tree, std::vector<std::string>& errors) const {
    for (const auto& [section, body] : tree) {
      if (body.empty() && !body.data().empty()) {
        errors.push_back("key '" + section + "' outside of any section");
        continue;
      }
      for (const auto& [key, value] : body) {
        const std::string path = section + "." + key;
        const auto it = setters_.find(path);
        if (it == setters_.end()) {
          errors.push_back("unknown key '" + path + "'");
          continue;
        }
        try {
          it->second(value.data());
        } catch (const std::exception& e) {
          errors.push_back(path + ": " + e.what());
        }
      }
    }
  }

 private:
  std::map<std::string, Setter> setters_;
};

bool parse_bool(std::string_view text) {
  text = detail::trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ValidationError("not a boolean: '" + std::string(text) + "'");
}

int parse_count(std::string_view text) {
  const long v = detail::parse_int(text);
  if (v < INT32_MIN || v > INT32_MAX) throw ValidationError("integer out of range");
  return static_cast<int>(v);
}

}  // namespace

ConfigIssues check_config(const ScenarioConfig& c) {
  ConfigIssues out;
  auto& err = out.errors;
  std::optional<SpatialGrid> grid;
  std::optional<RelaxationKernel> kernel;
  try {
    grid = SpatialGrid::parse(c.grid);
  } catch (const std::exception& e) {
    err.push_back(std::string("grid.spec: ") + e.what());
  }
  try {
    kernel = RelaxationKernel::parse(c.kernel);
  } catch (const std::exception& e) {
    err.push_back(std::string("kernel.spec: ") + e.what());
  }

  if (!(c.m >= 1.0) || !std::isfinite(c.m)) err.push_back("integrator.m: must be >= 1");
  if (!(c.p > 1.0) || !std::isfinite(c.p)) err.push_back("integrator.p: must be > 1");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) err.push_back("integrator.t_end: must be >= 0");
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) err.push_back("integrator.cfl_safety: must lie in (0, 1]");
  if (c.output_every < 1) err.push_back("integrator.output_every: must be >= 1");
  if (c.stride < 1) err.push_back("integrator.stride: must be >= 1");
  if (!(c.s_cap >= 0.0)) err.push_back("integrator.s_cap: must be >= 0");
  if (c.dt && !(*c.dt > 0.0 && std::isfinite(*c.dt))) err.push_back("integrator.dt: must be positive");
  if (c.dt && *c.dt > 0.0 && grid && kernel) {
    const double k0 = c.switches.memory ? kernel->k0() : 1.0;
    const double bound = stability_bound(*grid, k0, 1.0);
    if (*c.dt > bound) {
      err.push_back("integrator.dt: " + detail::format_real(*c.dt) + " exceeds the stability bound " +
                    detail::format_real(bound));
    }
  }

  const double mp = c.p * (c.m + 1.0) / c.m;
  if (c.m >= 1.0 && c.p > 1.0) {
    std::vector<std::string> dim3;
    if (!(c.p < 6.0)) dim3.push_back("p = " + detail::format_real(c.p) + " violates p < 6");
    if (!(mp < 6.0)) dim3.push_back("p(m+1)/m = " + detail::format_real(mp) + " violates p(m+1)/m < 6");
    for (auto& msg : dim3) {
      if (c.dim3_semantics) err.push_back("integrator: " + msg);
      else out.warnings.push_back("three-dimensional exponent range: " + msg);
    }
  }

  const HistorySpec& h = c.history;
  if (!std::isfinite(h.amplitude)) err.push_back("history.amplitude: must be finite");
  if (!(h.support >= 0.0)) err.push_back("history.support: must be >= 0");
  if (!std::isfinite(h.rate)) err.push_back("history.rate: must be finite");
  if (h.profile == TemporalProfile::Bump && !(h.support > 0.0)) err.push_back("history.support: bump needs > 0");
  if (grid && h.shape == HistoryShape::Sine && static_cast<int>(h.modes.size()) != grid->dim()) {
    err.push_back("history.modes: need one mode number per axis");
  }
  for (int k : h.modes) {
    if (k < 1) err.push_back("history.modes: mode numbers must be >= 1");
  }
  if (!h.table.empty() && !std::filesystem::exists(h.table)) {
    err.push_back("history.table: file '" + h.table + "' not found");
  }

  if (!(c.window_lo >= 0.0 && c.window_lo < c.window_hi && c.window_hi <= 1.0)) {
    err.push_back("decay: need 0 <= window_lo < window_hi <= 1");
  }
  if (!(c.t_reiter > 0.0)) err.push_back("decay.t_reiter: must be positive");
  return out;
}

void validate(const ScenarioConfig& config) {
  const auto issues = check_config(config);
  if (issues.errors.empty()) return;
  std::string msg = "invalid scenario:";
  for (const auto& e : issues.errors) msg += "\n  " + e;
  throw ValidationError(msg);
}

ScenarioConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }

  ScenarioConfig c;
  HistorySpec& h = c.history;
  Reader r;
  auto real = [](double& dst) { return [&dst](std::string_view v) { dst = detail::parse_real(v); }; };
  auto count = [](int& dst) { return [&dst](std::string_view v) { dst = parse_count(v); }; };
  auto flag = [](bool& dst) { return [&dst](std::string_view v) { dst = parse_bool(v); }; };

  r.on("grid", "spec", [&](std::string_view v) { c.grid = detail::trim(v); });
  r.on("kernel", "spec", [&](std::string_view v) { c.kernel = detail::trim(v); });

  r.on("history", "mode", [&](std::string_view v) {
    v = detail::trim(v);
    if (v == "zero") h.mode = ExtensionMode::Zero;
    else if (v == "frozen") h.mode = ExtensionMode::Frozen;
    else throw ValidationError("expected zero or frozen");
  });
  r.on("history", "profile", [&](std::string_view v) {
    v = detail::trim(v);
    if (v == "constant") h.profile = TemporalProfile::Constant;
    else if (v == "exp_ramp") h.profile = TemporalProfile::ExpRamp;
    else if (v == "bump") h.profile = TemporalProfile::Bump;
    else throw ValidationError("expected constant, exp_ramp or bump");
  });
  r.on("history", "shape", [&](std::string_view v) {
    v = detail::trim(v);
    if (v == "sine") h.shape = HistoryShape::Sine;
    else if (v == "ground_state") h.shape = HistoryShape::GroundState;
    else throw ValidationError("expected sine or ground_state");
  });
  r.on("history", "amplitude", real(h.amplitude));
  r.on("history", "modes", [&](std::string_view v) {
    h.modes.clear();
    for (auto part : detail::split(v, ',')) h.modes.push_back(parse_count(part));
  });
  r.on("history", "support", real(h.support));
  r.on("history", "rate", real(h.rate));
  r.on("history", "table", [&](std::string_view v) { h.table = detail::trim(v); });

  r.on("integrator", "m", real(c.m));
  r.on("integrator", "p", real(c.p));
  r.on("integrator", "dt", [&](std::string_view v) {
    if (detail::trim(v) == "auto") c.dt.reset();
    else c.dt = detail::parse_real(v);
  });
  r.on("integrator", "t_end", real(c.t_end));
  r.on("integrator", "cfl_safety", real(c.cfl_safety));
  r.on("integrator", "output_every", count(c.output_every));
  r.on("integrator", "stride", count(c.stride));
  r.on("integrator", "s_cap", real(c.s_cap));
  r.on("integrator", "seed", [&](std::string_view v) {
    const long s = detail::parse_int(v);
    if (s < 0) throw ValidationError("seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  });
  r.on("integrator", "dim3_semantics", flag(c.dim3_semantics));
  r.on("integrator", "damping", flag(c.switches.damping));
  r.on("integrator", "source", flag(c.switches.source));
  r.on("integrator", "memory", flag(c.switches.memory));
  r.on("integrator", "blowup_control", flag(c.blowup_control));

  r.on("decay", "window_lo", real(c.window_lo));
  r.on("decay", "window_hi", real(c.window_hi));
  r.on("decay", "t_reiter", real(c.t_reiter));

  std::vector<std::string> errors;
  r.apply(tree, errors);
  for (auto& e : check_config(c).errors) errors.push_back(std::move(e));
  if (!errors.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_string(const ScenarioConfig& c) {
  using detail::format_real;
  std::ostringstream o;
  o << "[grid]\nspec = " << c.grid << "\n\n";
  o << "[kernel]\nspec = " << c.kernel << "\n\n";
  const HistorySpec& h = c.history;
  o << "[history]\n"
    << "mode = " << to_token(h.mode) << '\n'
    << "profile = " << to_token(h.profile) << '\n'
    << "shape = " << to_token(h.shape) << '\n'
    << "amplitude = " << format_real(h.amplitude) << '\n'
    << "modes = " << join_modes(h.modes) << '\n'
    << "support = " << format_real(h.support) << '\n'
    << "rate = " << format_real(h.rate) << '\n';
  if (!h.table.empty()) o << "table = " << h.table << '\n';
  o << "\n[integrator]\n"
    << "m = " << format_real(c.m) << '\n'
    << "p = " << format_real(c.p) << '\n'
    << "dt = " << (c.dt ? format_real(*c.dt) : std::string("auto")) << '\n'
    << "t_end = " << format_real(c.t_end) << '\n'
    << "cfl_safety = " << format_real(c.cfl_safety) << '\n'
    << "output_every = " << c.output_every << '\n'
    << "stride = " << c.stride << '\n'
    << "s_cap = " << format_real(c.s_cap) << '\n'
    << "seed = " << c.seed << '\n'
    << "dim3_semantics = " << to_token(c.dim3_semantics) << '\n'
    << "damping = " << to_token(c.switches.damping) << '\n'
    << "source = " << to_token(c.switches.source) << '\n'
    << "memory = " << to_token(c.switches.memory) << '\n'
    << "blowup_control = " << to_token(c.blowup_control) << '\n';
  o << "\n[decay]\n"
    << "window_lo = " << format_real(c.window_lo) << '\n'
    << "window_hi = " << format_real(c.window_hi) << '\n'
    << "t_reiter = " << format_real(c.t_reiter) << '\n';
  return o.str();
}

void save_config(const ScenarioConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write config '" + path.string() + "'");
  out << config_to_string(config);
}

std::string content_hash(const ScenarioConfig& config) {
  const std::string text = config_to_string(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

HistoryDatum make_history(const HistorySpec& spec, const SpatialGrid& grid, double p, double spacing) {
  if (!spec.table.empty()) {
    return HistoryDatum::from_table(spec.table, grid, spacing, spec.mode).scaled(spec.amplitude);
  }
  Field shape(grid);
  if (spec.shape == HistoryShape::Sine) {
    shape = Field::sine_mode(grid, spec.modes, spec.amplitude);
  } else {
    shape = spec.amplitude * sobolev_gamma(grid, p).ground_state;
  }
  return HistoryDatum::from_profile(shape, spec.profile, spec.support, spec.rate, spec.mode, spacing);
}

ResolvedScenario resolve(const ScenarioConfig& config) {
  validate(config);
  const SpatialGrid grid = SpatialGrid::parse(config.grid);
  Dynamics dyn{RelaxationKernel::parse(config.kernel), config.m, config.p, config.switches};
  double dt = 0.0;
  if (config.dt) {
    dt = *config.dt;
  } else {
    const double k0 = dyn.switches.memory ? dyn.kernel.k0() : 1.0;
    const double bound = stability_bound(grid, k0, config.cfl_safety);
    dt = config.t_end > 0.0 ? config.t_end / std::ceil(config.t_end / bound) : bound;
  }
  MemoryOptions mem;
  mem.s_cap = config.s_cap;
  mem.stride = config.stride;
  HistoryDatum history = make_history(config.history, grid, config.p, dt * config.stride);
  return {grid, dyn, std::move(history), dt, mem};
}

}  // namespace viscowave
