#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specbound::config {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { Bound, Eigs, Verify, Report };

struct ProblemSpec {
  std::string family;  // gaussian | power_product | custom
  int dim = 1;
  double a = 1.5;
  double c = 0.0;
  double tau = 0.01;
  std::string expr;  // custom family
};

struct WeightSpec {
  std::string family = "identity";  // identity | exp_eps_u | optimize
  std::vector<double> eps;
};

struct GridSpec {
  double radius = 0.0;  // 0 -> per-dimension default
  int n = 0;            // 0 -> per-dimension default
};

/// Parsed run configuration (sections: problem / weight / grid / commands /
/// output).  Unknown keys are rejected.
struct RunConfig {
  int schema_version = 1;
  ProblemSpec problem;
  WeightSpec weight;
  GridSpec grid;
  std::vector<Command> commands;
  std::string output_dir = "out";
  bool write_csv = false;
  bool dump_matrices = false;
  unsigned long seed = 0;
  int threads = 1;

  double effective_radius() const;
  int effective_n() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace specbound::config
