#include "specbound/oracle.hpp"
#include "specbound/runner.hpp"

#include <CLI11.hpp>

#include <Eigen/Core>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Spectral lower bounds for diffusion generators, with a grid oracle"};

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  bool dump_matrices = false;
  unsigned long seed = 0;

  app.add_option("--config", config_path, "Run configuration file")
      ->required()
      ->envname("SPECBOUND_CONFIG");
  app.add_option("--out", out_dir, "Output directory (overrides the config)")
      ->envname("SPECBOUND_OUT");
  app.add_option("--threads", threads, "Worker threads for linear algebra")
      ->envname("SPECBOUND_THREADS");
  app.add_flag("--dump-matrices", dump_matrices,
               "Dump stiffness/mass matrices as CSV");
  app.add_option("--seed", seed, "Seed for iterative eigensolver start vectors")
      ->envname("SPECBOUND_SEED");

  CLI11_PARSE(app, argc, argv);

  specbound::config::RunConfig cfg;
  try {
    cfg = specbound::config::parse_config_file(config_path);
  } catch (const specbound::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  if (!out_dir.empty()) cfg.output_dir = out_dir;
  cfg.threads = threads;
  cfg.dump_matrices = cfg.dump_matrices || dump_matrices;
  if (app.count("--seed") || std::getenv("SPECBOUND_SEED")) cfg.seed = seed;
  Eigen::setNbThreads(threads);

  try {
    specbound::runner::RunOutcome outcome = specbound::runner::run(cfg);
    specbound::runner::write_report(cfg, outcome.report);

    for (const auto& b : outcome.report["bounds"])
      std::cout << b["method"].get<std::string>() << " ["
                << b["target"].get<std::string>()
                << "] = " << b["value"].get<double>()
                << (b["applicable"].get<bool>() ? "" : "  (not applicable)")
                << "\n";
    if (outcome.report.contains("spectrum")) {
      std::cout << "oracle eigenvalues:";
      for (const auto& ev : outcome.report["spectrum"]["eigenvalues"])
        std::cout << " " << ev.get<double>();
      std::cout << "\n";
    }
    if (!outcome.report["violations"].empty())
      std::cerr << "WARNING: bound exceeds oracle value beyond tolerance\n";
    std::cout << "report written to " << cfg.output_dir << "/report.json\n";
    return outcome.exit_code;
  } catch (const specbound::oracle::NoConvergence& e) {
    std::cerr << "solver did not converge: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
