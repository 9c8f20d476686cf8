#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "pairflow/errors.hpp"
#include "pairflow/runner.hpp"

using namespace pairflow;

int main(int argc, char** argv) {
  CLI::App app{"pairflow: pseudo-spectral coupled stochastic flow/advection "
               "simulator on the 2D torus"};
  app.require_subcommand(1);

  CliOptions opts;
  if (const char* env = std::getenv("PAIRFLOW_OUT_DIR")) opts.out_dir = env;
  std::uint64_t seed_override = 0;
  bool have_seed_override = false;

  app.add_option("--config", opts.config_path, "run configuration file")
      ->envname("PAIRFLOW_CONFIG");
  app.add_option("--out-dir", opts.out_dir, "output directory");
  app.add_option("--seed-override", seed_override,
                 "replace the configured seed")
      ->each([&](const std::string&) { have_seed_override = true; });
  app.add_option("--threads", opts.threads, "concurrent run workers")
      ->check(CLI::PositiveNumber);

  std::string restart_path;
  CLI::App* simulate = app.add_subcommand("simulate", "run one trajectory");
  simulate->add_option("--restart", restart_path,
                       "continue from a checkpoint file");

  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "run an oracle suite");
  verify->add_option("--suite", suite,
                     "spectral | reduction | symmetry | identities | ou")
      ->required();

  CLI::App* sweep = app.add_subcommand("sweep", "execute the lambda sweep");

  std::string snapshot_glob;
  CLI::App* structure = app.add_subcommand(
      "structure", "structure functions and scaling fits from snapshots");
  structure->add_option("--snapshots", snapshot_glob, "snapshot file glob")
      ->required();

  CLI11_PARSE(app, argc, argv);
  if (have_seed_override) opts.seed_override = seed_override;

  try {
    if (simulate->parsed()) {
      cmd_simulate(opts, restart_path);
      return int(ExitCode::ok);
    }
    if (verify->parsed())
      return cmd_verify(opts, suite) ? int(ExitCode::ok)
                                     : int(ExitCode::numerics);
    if (sweep->parsed())
      return cmd_sweep(opts) ? int(ExitCode::ok) : int(ExitCode::numerics);
    if (structure->parsed()) {
      cmd_structure(opts, snapshot_glob);
      return int(ExitCode::ok);
    }
  } catch (const InsufficientDataError& e) {
    std::fprintf(stderr, "pairflow: insufficient data: %s\n", e.what());
    return int(ExitCode::insufficient_data);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "pairflow: %s\n", e.what());
    return int(ExitCode::validation);
  } catch (const BlowUpError& e) {
    std::fprintf(stderr, "pairflow: %s\n", e.what());
    return int(ExitCode::numerics);
  } catch (const NumericsError& e) {
    std::fprintf(stderr, "pairflow: numerics failure: %s\n", e.what());
    return int(ExitCode::numerics);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pairflow: %s\n", e.what());
    return int(ExitCode::validation);
  }
  return int(ExitCode::validation);
}
