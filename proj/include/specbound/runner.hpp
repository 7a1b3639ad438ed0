#pragma once

#include "specbound/config.hpp"

#include <json.hpp>

namespace specbound::runner {

struct RunOutcome {
  nlohmann::json report;
  int exit_code = 0;  // 0 ok, 2 bound-vs-oracle violation, 3 non-convergence
};

/// Executes the configured commands in order and assembles the report.
/// Config errors throw config::ConfigError (exit code 1 at the CLI).
RunOutcome run(const config::RunConfig& cfg);

/// Serializes and writes the report (plus optional CSV tables) under
/// cfg.output_dir.
void write_report(const config::RunConfig& cfg, const nlohmann::json& report);

}  // namespace specbound::runner
