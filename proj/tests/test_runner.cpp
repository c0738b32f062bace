#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <viscowave/config.hpp>
#include <viscowave/error.hpp>
#include <viscowave/runner.hpp>

using namespace viscowave;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"([grid]
spec = 1d:pi:60

[kernel]
spec = exp:1:1

[history]
mode = frozen
amplitude = 0.5

[integrator]
m = 1
p = 3
dt = 0.02
t_end = 2
)";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config loads") {
  const ScenarioConfig c = parse_config(kMinimal);
  CHECK(c.grid == "1d:pi:60");
  CHECK(c.history.mode == ExtensionMode::Frozen);
  CHECK(c.history.amplitude == 0.5);
  REQUIRE(c.dt.has_value());
  CHECK(*c.dt == 0.02);
  CHECK(c.t_end == 2.0);
  CHECK(check_config(c).errors.empty());
}

TEST_CASE("schema violations are rejected together") {
  std::string text = kMinimal;
  text.replace(text.find("m = 1"), 5, "m = 0.5");
  text += "colour = blue\n";
  const std::string msg = error_of(text);
  CHECK(msg.find("integrator.m") != std::string::npos);
  CHECK(msg.find("integrator.colour") != std::string::npos);

  ScenarioConfig dim3 = parse_config(kMinimal);
  dim3.p = 5.5;
  dim3.dim3_semantics = true;
  CHECK_THROWS_AS(validate(dim3), ValidationError);
  dim3.dim3_semantics = false;
  CHECK_NOTHROW(validate(dim3));
  CHECK_FALSE(check_config(dim3).warnings.empty());

  ScenarioConfig fast = parse_config(kMinimal);
  fast.dt = 1.0;
  CHECK_THROWS_AS(validate(fast), ValidationError);
  CHECK_THROWS_AS(parse_config("[grid\nspec = x"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.ini"), ValidationError);
}

TEST_CASE("config round trip and content hash") {
  ScenarioConfig c = parse_config(kMinimal);
  c.history.modes = {3};
  c.switches.source = false;
  c.seed = 17;
  CHECK(parse_config(config_to_string(c)) == c);

  TempDir dir("viscowave_config_test");
  save_config(c, dir.path / "c.ini");
  CHECK(load_config(dir.path / "c.ini") == c);

  const std::string h = content_hash(c);
  CHECK(h.size() == 64);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(content_hash(parse_config(config_to_string(c))) == h);
  ScenarioConfig other = c;
  other.history.amplitude = 0.51;
  CHECK(content_hash(other) != h);
  CHECK(content_hash(ScenarioConfig{}) == content_hash(parse_config(config_to_string(ScenarioConfig{}))));
}

TEST_CASE("t_end = 0 yields a single row") {
  ScenarioConfig c = parse_config(kMinimal);
  c.t_end = 0.0;
  const auto out = simulate(c);
  CHECK(out.ledger.rows.size() == 1);
  CHECK(out.steps == 0);
}

TEST_CASE("persist writes a self-contained run directory") {
  TempDir root("viscowave_persist_test");
  RunRecord rec = execute(parse_config(kMinimal));
  persist(rec, root.path, false);
  CHECK(rec.directory == root.path / rec.hash);
  CHECK(fs::exists(rec.config_path));
  CHECK(fs::exists(rec.ledger_path));
  CHECK(fs::exists(rec.summary_path));

  RunRecord again = execute(load_config(rec.config_path));
  CHECK(again.hash == rec.hash);
  CHECK(again.outcome.ledger == EnergyLedger::read_csv(rec.ledger_path));
  CHECK_THROWS_AS(persist(again, root.path, false), ValidationError);
  CHECK_NOTHROW(persist(again, root.path, true));

  std::ifstream in(rec.summary_path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["version"] == version());
  CHECK(j["status"] == "completed");
  CHECK(j["classification"]["verdict"] == "W1");
  CHECK(j["blowup"]["fired"] == false);
  CHECK(j["constants"]["y0"].get<double>() == Approx(2.0 * j["constants"]["d"].get<double>()));
  CHECK(j["E0"].get<double>() == rec.outcome.ledger.E0());
}

TEST_CASE("sweep produces one row per combination") {
  ScenarioConfig c = parse_config(kMinimal);
  c.t_end = 0.5;
  const auto rows = sweep(c, {{0.1, 0.5, 2.0}, {1.0, 3.0}, {}});
  CHECK(rows.size() == 6);
  const std::string table = sweep_table(rows);
  CHECK(std::count(table.begin(), table.end(), '\n') == 7);
  for (const auto& r : rows) {
    if (r.amplitude == 2.0) CHECK(r.E0 < 0.0);
    if (r.amplitude == 0.1) CHECK(r.initial == WellClass::W1);
  }
}

TEST_CASE("output root honours the environment") {
  setenv("VISCOWAVE_OUT", "/tmp/viscowave_elsewhere", 1);
  CHECK(output_root() == fs::path("/tmp/viscowave_elsewhere"));
  unsetenv("VISCOWAVE_OUT");
  CHECK(output_root() == fs::path("runs"));
}
