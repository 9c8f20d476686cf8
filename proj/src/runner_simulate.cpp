#include <cstdio>
#include <filesystem>
#include <limits>

#include "pairflow/checkpoint.hpp"
#include "pairflow/csv.hpp"
#include "pairflow/errors.hpp"
#include "pairflow/hash.hpp"
#include "pairflow/manifest.hpp"
#include "pairflow/runner.hpp"
#include "pairflow/statistics.hpp"

namespace pairflow {

namespace fs = std::filesystem;

RunConfig load_run_config(const CliOptions& opts) {
  if (opts.config_path.empty())
    throw ConfigError("no configuration file given (use --config)");
  RunConfig cfg = load_config_file(opts.config_path);
  if (opts.seed_override) cfg.simulation.seed = *opts.seed_override;
  return cfg;
}

namespace {

std::string padded(int value, int width) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%0*d", width, value);
  return buf;
}

void add_artifact(RunManifest& manifest, const fs::path& dir,
                  const std::string& name) {
  manifest.artifacts.push_back({name, fnv1a_file((dir / name).string())});
}

}  // namespace

void cmd_simulate(const CliOptions& opts, const std::string& restart_path) {
  RunConfig run = load_run_config(opts);
  SimulationConfig& cfg = run.simulation;
  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);

  const Lattice lattice(cfg.resolution, cfg.domain_size);
  const NoiseModel model = cfg.noise.build(lattice);

  RunManifest manifest;
  manifest.created = utc_timestamp();
  manifest.seed = cfg.seed;
  manifest.build = build_identity();
  manifest.threads = opts.threads;
  manifest.config_text = serialize_config(run);

  std::vector<std::string> checkpoint_names;
  auto checkpoint_path = [&](int index) {
    return "ckpt_" + padded(index, 4) + ".pfck";
  };

  if (!restart_path.empty()) {
    // Continuation: reload state and stream positions, then step to the
    // horizon. No burn-in phase; observers are not replayed.
    const Checkpoint loaded = read_checkpoint(restart_path);
    if (loaded.noise_hash != model.hash())
      throw ConfigError("restart checkpoint was written with a different noise model");
    PairState state = restore_state(loaded, lattice);
    PairStepper stepper(
        lattice, model, StepperOptions::from(cfg),
        NoiseStream(cfg.seed, {0, cfg.replica, cfg.lambda_index}),
        NoiseStream(cfg.seed, {1, cfg.replica, cfg.lambda_index}));
    stepper.seek_streams(loaded.stream_pos_u, loaded.stream_pos_w);
    const long long remaining =
        std::max(0ll, cfg.total_steps() - std::llround(loaded.t / cfg.dt));
    for (long long s = 0; s < remaining; ++s) stepper.step(state);
    const Checkpoint final_ckpt =
        make_checkpoint(cfg, state, stepper.stream_u().position(),
                        stepper.stream_w().position(), model.hash());
    write_checkpoint((dir / "final.pfck").string(), final_ckpt);
    manifest.artifacts.push_back(
        {"final.pfck", fnv1a_file((dir / "final.pfck").string())});
    write_manifest((dir / "manifest.json").string(), manifest);
    std::printf("pairflow: continued %lld steps to t=%.6g\n", remaining,
                state.t);
    return;
  }

  {  // forcing spectrum tabulation: per-mode variances plus the traces
    const SpectrumReport spectrum = spectrum_report(model);
    CsvWriter csv((dir / "noise_spectrum.csv").string(),
                  {"k1", "k2", "gamma", "q", "trace_q", "trace_aq",
                   "alpha0_sup"});
    for (const SpectrumRow& row : spectrum.rows)
      csv.row()
          .cell(row.mode.k1)
          .cell(row.mode.k2)
          .cell(row.gamma)
          .cell(row.q)
          .cell(spectrum.trace_q)
          .cell(spectrum.trace_aq)
          .cell(spectrum.alpha0_sup);
  }

  PairState state = initial_state(cfg, lattice);
  PairObserver observer(lattice, model, cfg.lambda, cfg.nonlinear,
                        run.statistics.p_orders, run.statistics.batch_count);
  FourierWorkspace fourier(lattice);

  CsvWriter timeseries((dir / "timeseries.csv").string(),
                       {"t", "h2_u", "h2_w", "v2_u", "v2_w", "v2_x", "a2_x",
                        "d14_x"});
  int snapshot_index = 0;

  IntegrationHooks hooks;
  hooks.observe = [&](const PairState& s) {
    observer.observe(s);
    timeseries.row()
        .cell(s.t)
        .cell(sobolev_norm_sq(s.u, 0.0))
        .cell(sobolev_norm_sq(s.w, 0.0))
        .cell(sobolev_norm_sq(s.u, 0.5))
        .cell(sobolev_norm_sq(s.w, 0.5))
        .cell(sobolev_norm_sq(s.u, 0.5) + sobolev_norm_sq(s.w, 0.5))
        .cell(sobolev_norm_sq(s.u, 1.0) + sobolev_norm_sq(s.w, 1.0))
        .cell(sobolev_norm_sq(s.u, 0.25) + sobolev_norm_sq(s.w, 0.25));
  };
  hooks.snapshot = [&](const PairState& s) {
    const std::string name = "snap_" + padded(snapshot_index++, 5) + ".pfck";
    write_checkpoint((dir / name).string(),
                     make_checkpoint(cfg, s, 0, 0, model.hash()));
    checkpoint_names.push_back(name);
  };
  hooks.checkpoint = [&](const PairState& s, const PairStepper& stepper,
                         int index) {
    const std::string name = checkpoint_path(index);
    write_checkpoint((dir / name).string(),
                     make_checkpoint(cfg, s, stepper.stream_u().position(),
                                     stepper.stream_w().position(),
                                     model.hash()));
    checkpoint_names.push_back(name);
  };

  IntegrationResult result;
  try {
    result = integrate(cfg, state, hooks);
  } catch (const BlowUpError& e) {
    const std::string last =
        checkpoint_names.empty() ? std::string("none") : checkpoint_names.back();
    throw BlowUpError(std::string(e.what()) + " (last checkpoint: " + last + ")",
                      e.time(), e.max_coefficient(), last);
  }

  // Final state checkpoint; every step consumes one position per stream.
  write_checkpoint((dir / "final.pfck").string(),
                   make_checkpoint(cfg, state, std::uint64_t(result.steps),
                                   std::uint64_t(result.steps), model.hash()));
  checkpoint_names.push_back("final.pfck");

  {
    CsvWriter summary((dir / "summary.csv").string(),
                      {"observable", "mean", "stderr", "samples"});
    const StatsAccumulator& acc = observer.stats();
    for (std::size_t i = 0; i < acc.names().size(); ++i) {
      double se = std::numeric_limits<double>::quiet_NaN();
      if (acc.complete_batches() >= 2) se = acc.batch_stderr(i);
      if (acc.count() > 0)
        summary.row()
            .cell(acc.names()[i])
            .cell(acc.mean(i))
            .cell(se)
            .cell(acc.count());
    }
  }

  add_artifact(manifest, dir, "noise_spectrum.csv");
  add_artifact(manifest, dir, "timeseries.csv");
  add_artifact(manifest, dir, "summary.csv");
  for (const std::string& name : checkpoint_names)
    add_artifact(manifest, dir, name);
  write_manifest((dir / "manifest.json").string(), manifest);

  std::printf(
      "pairflow: %lld steps, burn-in %.6g, %lld observations, t=%.6g\n",
      result.steps, result.burn_in_used, result.observations, state.t);
}

}  // namespace pairflow
