#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bresse/characteristic.hpp"
#include "bresse/decay_analysis.hpp"
#include "bresse/discretization.hpp"
#include "bresse/memory_kernel.hpp"
#include "bresse/model_config.hpp"
#include "bresse/simulator.hpp"
#include "bresse/spectral.hpp"

namespace bresse {

class ConfigError : public std::runtime_error {
public:
  ConfigError(int line, const std::string &msg);
  int line() const { return line_; }

private:
  int line_;
};

// A failure inside one of the numerical modules.
class ComputeError : public std::runtime_error {
public:
  ComputeError(const std::string &module, const std::string &msg);
  const std::string &module() const { return module_; }

private:
  std::string module_;
};

enum class Experiment { Simulate, Spectrum, Resolvent, Characteristic, Classify, FullReport };

struct ExperimentConfig {
  std::string id = "config";
  Experiment experiment = Experiment::Classify;
  KernelSpec kernel;
  PhysicalParams params;
  BoundaryCondition bc = BoundaryCondition::DDD;
  int nx = 40;
  int ns = 32;
  double trunc_tol = 1e-8;
  double T = 100.0;
  std::optional<double> dt;
  int stride = 1;
  std::string ic = "smooth_bump";
  unsigned long long seed = 0;
  double lambda_min = 5.0;
  std::optional<double> lambda_max;
  int samples = 60;
  std::string placement = "peaks";
  int n_min = 10;
  int n_max = 30;
};

ExperimentConfig parse_config(std::istream &in, const std::string &id = "config");
ExperimentConfig load_config(const std::filesystem::path &path);

std::string to_string(Experiment e);

enum class Tag { Pass, Fail, Uncovered, Info };

struct ReportLine {
  Tag tag = Tag::Info;
  std::string text;
};

struct RunResult {
  std::vector<ReportLine> lines;
  std::vector<std::string> files;
  bool failed() const;
  int exit_code() const { return failed() ? 1 : 0; }
};

RunResult run(const ExperimentConfig &cfg, const std::filesystem::path &out_dir, int threads = 1);

void write_energy_csv(std::ostream &os, const EnergyTrace &tr);
void write_spectrum_csv(std::ostream &os, const SpectrumReport &r);
void write_resolvent_csv(std::ostream &os, const ResolventScan &s);
void write_branches_csv(std::ostream &os, const std::vector<BranchRoot> &roots);
void write_fits_header(std::ostream &os);
void write_fit_row(std::ostream &os, const std::string &config_id, const DecayFit &f);

} // namespace bresse
