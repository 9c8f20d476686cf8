#pragma once

#include <string>
#include <vector>

#include "pairflow/dynamics.hpp"

namespace pairflow {

struct StatisticsConfig {
  std::vector<int> p_orders = {2, 3, 4, 6};
  int batch_count = 30;
  double fit_lmin = 0.0;  // 0 = auto (4 grid spacings)
  double fit_lmax = 0.0;  // 0 = auto (N h / 8)
};

struct SweepConfig {
  std::vector<double> lambdas;
  double lambda0 = 0.0;
  int replicas = 1;
  bool shared_noise = true;
  double pathwise_horizon = 0.0;  // 0 = auto (20 eddy turnovers)
};

struct RunConfig {
  SimulationConfig simulation;
  StatisticsConfig statistics;
  SweepConfig sweep;
};

// Flat sectioned key = value text. Unknown sections or keys are errors;
// every violation is collected and reported in one ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Canonical serialization; parse(serialize(cfg)) reproduces cfg exactly.
std::string serialize_config(const RunConfig& cfg);

}  // namespace pairflow
