#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using doctest::Approx;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "viscowave");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = viscowave::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("constants subcommand") {
  const auto r = invoke({"constants", "--p", "3", "--grid", "1d:pi:200", "--kernel", "exp:1:1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const double gamma = j["gamma"], d = j["d"], y0 = j["y0"], M = j["M"];
  CHECK(d == Approx(std::pow(gamma, -4.0) / 4.0).epsilon(1e-14));
  CHECK(y0 == Approx(2.0 * d).epsilon(1e-15));
  CHECK(M / d == Approx(0.9571).epsilon(1e-4));
  CHECK(j["k0"] == 2.0);
}

TEST_CASE("usage and validation errors exit with 1") {
  CHECK(invoke({"run", "--config", "missing.file"}).code == 1);
  CHECK(invoke({"constants", "--bogus"}).code == 1);
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"constants", "--p", "0.5"}).code == 1);
  CHECK(invoke({"constants", "--grid", "1d:pi:2"}).code == 1);
}

TEST_CASE("run, classify and decay-fit on a small scenario") {
  const fs::path dir = fs::temp_directory_path() / "viscowave_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "scenario.ini";
  std::ofstream(cfg) << "[grid]\nspec = 1d:pi:60\n[history]\nmode = frozen\namplitude = 0.5\n"
                        "[integrator]\nt_end = 10\noutput_every = 5\n";

  const auto run = invoke({"run", "--config", cfg.string(), "--out", (dir / "runs").string()});
  REQUIRE(run.code == 0);
  const auto summary = nlohmann::json::parse(run.out);
  const std::string hash = summary["config_hash"];
  const fs::path ledger = dir / "runs" / hash / "ledger.csv";
  CHECK(fs::exists(ledger));
  CHECK(invoke({"run", "--config", cfg.string(), "--out", (dir / "runs").string()}).code == 1);
  CHECK(invoke({"run", "--config", cfg.string(), "--out", (dir / "runs").string(), "--force"}).code == 0);

  const auto cls = invoke({"classify", "--config", cfg.string()});
  REQUIRE(cls.code == 0);
  CHECK(nlohmann::json::parse(cls.out)["class"] == "W1");
  const auto big = invoke({"classify", "--config", cfg.string(), "--amplitude", "1.4"});
  CHECK(nlohmann::json::parse(big.out)["class"] == "W2");

  const auto fit = invoke({"decay-fit", ledger.string(), "--predict", "1", "-", "-", "0"});
  REQUIRE(fit.code == 0);
  const auto j = nlohmann::json::parse(fit.out);
  CHECK(j["fitted_rate"].get<double>() > 0.0);
  CHECK(j["predicted"]["case"] == 1);
  CHECK(j["verdict"] == "consistent");
  CHECK(invoke({"decay-fit", ledger.string(), "--model", "cubic"}).code == 1);
  CHECK(invoke({"decay-fit", (dir / "nope.csv").string()}).code == 1);

  const auto sw = invoke({"sweep", "--config", cfg.string(), "--amplitudes", "0.1,0.5", "--m", "1,3"});
  REQUIRE(sw.code == 0);
  CHECK(std::count(sw.out.begin(), sw.out.end(), '\n') == 5);
  fs::remove_all(dir);
}
