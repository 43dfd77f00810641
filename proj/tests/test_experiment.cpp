#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bresse/experiment.hpp"

using namespace bresse;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = BRESSE_CONFIG_DIR;

ExperimentConfig parse(const std::string &text) {
  std::istringstream in(text);
  return parse_config(in);
}

int error_line(const std::string &text) {
  try {
    parse(text);
  } catch (const ConfigError &e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string &text) {
  try {
    parse(text);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path &p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string &name) {
  fs::path d = fs::temp_directory_path() / ("bresse_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::string kElastic = "experiment = classify\n"
                             "kernel.a = 0.5\nkernel.c = 1\n"
                             "params.rho1 = 1\nparams.rho2 = 1\n"
                             "params.k1 = 1\nparams.k2 = 1\nparams.k3 = 1\n";

} // namespace

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line(kElastic + "params.kappa = 2\n") == 9);
  CHECK(error_line(kElastic + "# note\nparams.k2 = 3\n") == 10);
  CHECK(error_text(kElastic + "params.k2 = 3\n").find("duplicate key 'params.k2'") != std::string::npos);
  CHECK(error_line(kElastic + "disc.nx = forty\n") == 9);
  CHECK(error_line(kElastic + "just words\n") == 9);
  CHECK(error_text(kElastic + "experiment2 = x\n").find("unknown key") != std::string::npos);
}

TEST_CASE("missing keys are named") {
  std::string thermal = kElastic + "params.thermal = true\nparams.rho3 = 1\nparams.delta = 1\nparams.tau = 2\n";
  CHECK(error_text(thermal).find("params.beta") != std::string::npos);
  CHECK(error_text("experiment = classify\nkernel.a = 0.5\n").find("kernel.c") != std::string::npos);
  CHECK(error_text(kElastic + "params.tau = 1\n").find("only applies") != std::string::npos);
}

TEST_CASE("configs in the repository parse") {
  for (const auto &e : fs::directory_iterator(kConfigs)) {
    if (e.path().extension() != ".cfg")
      continue;
    INFO(e.path().string());
    CHECK_NOTHROW(load_config(e.path()));
  }
  auto c = load_config(kConfigs / "all_ones.cfg");
  CHECK(c.params.ell == 1.0);
  CHECK(c.experiment == Experiment::FullReport);
  CHECK(c.id == "all_ones");
  CHECK_THROWS_AS(load_config(kConfigs / "missing.cfg"), ConfigError);
}

TEST_CASE("classify names the equal-speed theorem") {
  auto cfg = load_config(kConfigs / "classify_all_ones.cfg");
  auto out = scratch("classify");
  RunResult r = run(cfg, out);
  CHECK_FALSE(r.failed());
  std::string report = slurp(out / "report.txt");
  CHECK(report.find("Th. 3.5") != std::string::npos);
  CHECK(report.find("Exponential") != std::string::npos);
}

TEST_CASE("reruns produce identical files") {
  auto cfg = load_config(kConfigs / "poly_one.cfg");
  cfg.experiment = Experiment::Simulate;
  cfg.nx = 12;
  cfg.ns = 8;
  cfg.T = 20.0;
  cfg.dt = 0.1;
  cfg.stride = 5;
  auto a = scratch("rerun_a"), b = scratch("rerun_b");
  run(cfg, a);
  run(cfg, b);
  for (const char *f : {"energy.csv", "fits.csv", "report.txt"}) {
    INFO(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "energy.csv").rfind("t,E,", 0) == 0);
}

TEST_CASE("full report on the Timoshenko config writes every output") {
  auto cfg = load_config(kConfigs / "timoshenko.cfg");
  cfg.nx = 40;
  cfg.ns = 16;
  cfg.T = 20.0;
  cfg.samples = 12;
  auto out = scratch("timoshenko");
  RunResult r = run(cfg, out, 2);
  for (const char *f : {"energy.csv", "fits.csv", "spectrum.csv", "resolvent.csv", "branches.csv", "report.txt"}) {
    INFO(f);
    CHECK(fs::exists(out / f));
    CHECK(fs::file_size(out / f) > 0);
  }
  std::string report = slurp(out / "report.txt");
  CHECK(report.find("TH4.3") != std::string::npos);
  CHECK(report.find("[FAIL]") == std::string::npos);
  CHECK_FALSE(r.failed());
}

TEST_CASE("resolvent window beyond the grid limit is rejected") {
  auto cfg = load_config(kConfigs / "poly_one.cfg");
  cfg.experiment = Experiment::Resolvent;
  cfg.nx = 12;
  cfg.ns = 8;
  cfg.lambda_max = 1e4;
  CHECK_THROWS_AS(run(cfg, scratch("window")), ConfigError);
}
