#include <iostream>

#include <CLI11.hpp>

#include "bresse/experiment.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Numerical laboratory for the Bresse system with memory and Cattaneo heat conduction"};
  std::string config;
  std::string out = "out";
  int threads = 1;
  app.add_option("config", config, "experiment config file (key = value lines)")->required();
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for independent sub-computations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    bresse::ExperimentConfig cfg = bresse::load_config(config);
    bresse::RunResult r = bresse::run(cfg, out, threads);
    for (const auto &l : r.lines)
      if (l.tag == bresse::Tag::Fail)
        std::cerr << "check failed: " << l.text << "\n";
    std::cout << "wrote";
    for (const auto &f : r.files)
      std::cout << ' ' << f;
    std::cout << " to " << out << "\n";
    return r.exit_code();
  } catch (const bresse::ConfigError &e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const bresse::ComputeError &e) {
    std::cerr << "computation failed " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
