#pragma once

#include <optional>
#include <string>

#include "pairflow/config.hpp"

namespace pairflow {

struct CliOptions {
  std::string config_path;
  std::string out_dir = "pairflow_out";
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
};

RunConfig load_run_config(const CliOptions& opts);

// Runs the configured trajectory; emits the time series, snapshots,
// checkpoints, an observable summary and the manifest. With a restart
// checkpoint the trajectory continues from the stored state and stream
// positions, bitwise identical to an uninterrupted run.
void cmd_simulate(const CliOptions& opts, const std::string& restart_path = {});

// Oracle suites; returns true iff every check passed. Writes
// verify_<suite>.csv and prints one line per check.
bool cmd_verify(const CliOptions& opts, const std::string& suite);

// Executes the lambda sweep: shared-noise trajectory distances against
// lambda0 plus per-lambda stationary panels and the convergence table.
// Returns true iff every run completed.
bool cmd_sweep(const CliOptions& opts);

// Structure functions and scaling fits from stored snapshots.
void cmd_structure(const CliOptions& opts, const std::string& snapshot_glob);

}  // namespace pairflow
