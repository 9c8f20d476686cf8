#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "pairflow/csv.hpp"
#include "pairflow/errors.hpp"
#include "pairflow/fourier.hpp"
#include "pairflow/hash.hpp"
#include "pairflow/manifest.hpp"
#include "pairflow/oracles.hpp"
#include "pairflow/runner.hpp"
#include "pairflow/statistics.hpp"
#include "pairflow/structure.hpp"

namespace pairflow {

namespace fs = std::filesystem;

namespace {

struct StationaryJob {
  SimulationConfig cfg;
  std::vector<int> p_orders;
  int batch_count = 30;
  int s2_separation = 1;

  bool done = false;
  bool failed = false;
  std::string error;
  StatsAccumulator stats;
  StatsAccumulator s2_stats;

  void run() {
    try {
      const Lattice lattice(cfg.resolution, cfg.domain_size);
      const NoiseModel model = cfg.noise.build(lattice);
      PairState state = initial_state(cfg, lattice);
      PairObserver observer(lattice, model, cfg.lambda, cfg.nonlinear,
                            p_orders, batch_count);
      FourierWorkspace fourier(lattice);
      StatsAccumulator s2({"s2_u", "s2_w"}, batch_count);
      IntegrationHooks hooks;
      hooks.observe = [&](const PairState& s) { observer.observe(s); };
      hooks.snapshot = [&](const PairState& s) {
        const PhysicalField pu = fourier.to_physical(s.u);
        const PhysicalField pw = fourier.to_physical(s.w);
        const double row[2] = {
            structure_moment(pu, 2, s2_separation, false),
            structure_moment(pw, 2, s2_separation, false)};
        s2.append(row);
      };
      integrate(cfg, state, hooks);
      stats = observer.stats();
      s2_stats = s2;
      done = true;
    } catch (const std::exception& e) {
      failed = true;
      error = e.what();
    }
  }
};

// Common-noise difference estimator: time averages of
// phi(x^lambda) - phi(x^lambda0) along lockstep shared-noise trajectories.
// Unbiased for the difference of stationary expectations with far smaller
// variance than independent runs, since the coupled paths stay close.
struct CoupledJob {
  SimulationConfig cfg;  // lambda of the sweep point; lambda0 separate
  double lambda0 = 0.0;
  double burn_time = 0.0;  // resolved by the orchestrator
  int batch_count = 30;
  int s2_separation = 1;

  bool done = false;
  bool failed = false;
  std::string error;
  StatsAccumulator diffs;

  static const std::vector<std::string>& names() {
    static const std::vector<std::string> n = {
        "h2_u", "h2_w", "h2_x", "v2_x", "hv4", "s2_u", "s2_w"};
    return n;
  }

  void run() {
    try {
      const Lattice lattice(cfg.resolution, cfg.domain_size);
      const NoiseModel model = cfg.noise.build(lattice);
      const StreamId id_u{0, cfg.replica, cfg.lambda_index};
      const StreamId id_w{1, cfg.replica, cfg.lambda_index};
      StepperOptions opts_l = StepperOptions::from(cfg);
      StepperOptions opts_0 = StepperOptions::from(cfg);
      opts_0.lambda = lambda0;
      PairStepper step_l(lattice, model, opts_l, NoiseStream(cfg.seed, id_u),
                         NoiseStream(cfg.seed, id_w));
      PairStepper step_0(lattice, model, opts_0, NoiseStream(cfg.seed, id_u),
                         NoiseStream(cfg.seed, id_w));
      PairState xl = initial_state(cfg, lattice);
      PairState x0 = initial_state(cfg, lattice);
      FourierWorkspace fourier(lattice);
      StatsAccumulator acc(names(), batch_count);

      const long long total = cfg.total_steps();
      const long long observe_every =
          std::max(1ll, std::llround(cfg.observe_interval / cfg.dt));
      long long burn = std::llround(burn_time / cfg.dt);
      burn = std::min(burn, total);
      for (long long s = 0; s < burn; ++s) {
        step_l.step(xl);
        step_0.step(x0);
      }
      auto norms = [](const PairState& x, double& h2u, double& h2w,
                      double& v2x) {
        h2u = sobolev_norm_sq(x.u, 0.0);
        h2w = sobolev_norm_sq(x.w, 0.0);
        v2x = sobolev_norm_sq(x.u, 0.5) + sobolev_norm_sq(x.w, 0.5);
      };
      for (long long s = burn; s < total; ++s) {
        step_l.step(xl);
        step_0.step(x0);
        if ((s - burn) % observe_every != 0) continue;
        double h2u_l, h2w_l, v2x_l, h2u_0, h2w_0, v2x_0;
        norms(xl, h2u_l, h2w_l, v2x_l);
        norms(x0, h2u_0, h2w_0, v2x_0);
        const PhysicalField pul = fourier.to_physical(xl.u);
        const PhysicalField pwl = fourier.to_physical(xl.w);
        const PhysicalField pu0 = fourier.to_physical(x0.u);
        const PhysicalField pw0 = fourier.to_physical(x0.w);
        const double row[7] = {
            h2u_l - h2u_0,
            h2w_l - h2w_0,
            (h2u_l + h2w_l) - (h2u_0 + h2w_0),
            v2x_l - v2x_0,
            (h2u_l + h2w_l) * v2x_l - (h2u_0 + h2w_0) * v2x_0,
            structure_moment(pul, 2, s2_separation, false) -
                structure_moment(pu0, 2, s2_separation, false),
            structure_moment(pwl, 2, s2_separation, false) -
                structure_moment(pw0, 2, s2_separation, false)};
        acc.append(row);
      }
      diffs = acc;
      done = true;
    } catch (const std::exception& e) {
      failed = true;
      error = e.what();
    }
  }
};

std::vector<PanelEntry> build_panel(const StationaryJob& job) {
  std::vector<PanelEntry> panel;
  const StatsAccumulator& acc = job.stats;
  auto push = [&](const StatsAccumulator& a, const std::string& name) {
    PanelEntry e;
    e.observable = name;
    e.mean = a.mean(name);
    e.se = a.complete_batches() >= 2 ? a.batch_stderr(name)
                                     : std::numeric_limits<double>::quiet_NaN();
    panel.push_back(e);
  };
  for (const char* name : {"h2_u", "h2_w", "h2_x", "v2_u", "v2_w", "v2_x"})
    push(acc, name);
  for (int p : job.p_orders)
    if (p == 4) push(acc, "hv4");
  if (job.s2_stats.count() > 0) {
    push(job.s2_stats, "s2_u");
    push(job.s2_stats, "s2_w");
  }
  return panel;
}

}  // namespace

bool cmd_sweep(const CliOptions& opts) {
  const RunConfig run = load_run_config(opts);
  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);

  RunManifest manifest;
  manifest.created = utc_timestamp();
  manifest.seed = run.simulation.seed;
  manifest.build = build_identity();
  manifest.threads = opts.threads;
  manifest.config_text = serialize_config(run);

  const double lambda0 = run.sweep.lambda0;
  std::vector<double> sweep_lambdas;
  for (double l : run.sweep.lambdas)
    if (l != lambda0) sweep_lambdas.push_back(l);

  bool all_ok = true;

  double tau0 = std::numeric_limits<double>::infinity();
  if (run.sweep.shared_noise && !sweep_lambdas.empty()) {
    SimulationConfig base = run.simulation;
    base.lambda = lambda0;
    tau0 = estimate_eddy_turnover(base);
  }

  // Pathwise trajectory distances on shared noise.
  if (run.sweep.shared_noise && !sweep_lambdas.empty()) {
    double horizon = run.sweep.pathwise_horizon;
    SimulationConfig base = run.simulation;
    base.lambda = lambda0;
    if (horizon <= 0.0) {
      horizon = std::isfinite(tau0) ? 20.0 * tau0 : run.simulation.t_final;
      horizon = std::min(horizon, run.simulation.t_final);
    }
    const int n_steps =
        int(std::max(1ll, std::llround(horizon / run.simulation.dt)));
    const std::vector<SweepDistance> table =
        lambda_sweep_distances(base, sweep_lambdas, lambda0, n_steps);
    CsvWriter csv((dir / "sweep_distances.csv").string(),
                  {"lambda", "sup_du", "sup_dw", "sup_du_over_lambda",
                   "status"});
    for (const SweepDistance& row : table) {
      if (row.failed) {
        all_ok = false;
        csv.row().cell(row.lambda).cell(row.max_du).cell(row.max_dw).cell(
            0.0).cell(std::string("failed: " + row.error));
        continue;
      }
      csv.row()
          .cell(row.lambda)
          .cell(row.max_du)
          .cell(row.max_dw)
          .cell(row.lambda != 0.0 ? row.max_du / std::abs(row.lambda) : 0.0)
          .cell(std::string("ok"));
    }
    manifest.artifacts.push_back(
        {"sweep_distances.csv",
         fnv1a_file((dir / "sweep_distances.csv").string())});
  }

  // Coupled common-noise differences of stationary observables; the
  // low-variance route to the weak-convergence distances.
  if (run.sweep.shared_noise && !sweep_lambdas.empty()) {
    std::vector<CoupledJob> cjobs;
    for (double lambda : sweep_lambdas) {
      CoupledJob job;
      job.cfg = run.simulation;
      job.cfg.lambda = lambda;
      job.lambda0 = lambda0;
      job.burn_time =
          run.simulation.burn_in_auto
              ? std::min(0.2 * run.simulation.t_final,
                         std::isfinite(tau0) ? 50.0 * tau0
                                             : 0.2 * run.simulation.t_final)
              : run.simulation.burn_in;
      job.batch_count = run.statistics.batch_count;
      job.s2_separation = std::max(1, run.simulation.resolution / 8);
      cjobs.push_back(job);
    }
    {
      std::atomic<std::size_t> next{0};
      auto worker = [&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cjobs.size()) return;
          cjobs[i].run();
        }
      };
      const int nthreads = std::max(1, opts.threads);
      std::vector<std::thread> pool;
      for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
      worker();
      for (std::thread& th : pool) th.join();
    }
    CsvWriter csv((dir / "coupled_convergence.csv").string(),
                  {"observable", "lambda", "diff", "diff_se", "samples",
                   "status"});
    for (const CoupledJob& job : cjobs) {
      if (job.failed) {
        all_ok = false;
        csv.row()
            .cell(std::string("-"))
            .cell(job.cfg.lambda)
            .cell(0.0)
            .cell(0.0)
            .cell(0ll)
            .cell(std::string("failed: " + job.error));
        continue;
      }
      for (const std::string& name : CoupledJob::names())
        csv.row()
            .cell(name)
            .cell(job.cfg.lambda)
            .cell(job.diffs.mean(name))
            .cell(job.diffs.batch_stderr(name))
            .cell(job.diffs.count())
            .cell(std::string("ok"));
    }
    manifest.artifacts.push_back(
        {"coupled_convergence.csv",
         fnv1a_file((dir / "coupled_convergence.csv").string())});
  }

  // Stationary panels per lambda (replicas merged).
  std::vector<double> all_lambdas = sweep_lambdas;
  all_lambdas.push_back(lambda0);
  std::vector<StationaryJob> jobs;
  for (std::size_t li = 0; li < all_lambdas.size(); ++li) {
    for (int r = 0; r < run.sweep.replicas; ++r) {
      StationaryJob job;
      job.cfg = run.simulation;
      job.cfg.lambda = all_lambdas[li];
      job.cfg.replica = std::uint32_t(r);
      job.cfg.lambda_index =
          run.sweep.shared_noise ? 0u : std::uint32_t(1 + li);
      if (job.cfg.snapshot_interval <= 0.0)
        job.cfg.snapshot_interval = 10.0 * job.cfg.observe_interval;
      job.p_orders = run.statistics.p_orders;
      job.batch_count = run.statistics.batch_count;
      job.s2_separation = std::max(1, run.simulation.resolution / 8);
      jobs.push_back(job);
    }
  }

  {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        jobs[i].run();
      }
    };
    const int nthreads = std::max(1, opts.threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
  }

  // Merge replicas per lambda, in fixed order.
  std::vector<std::pair<double, std::vector<PanelEntry>>> panels;
  CsvWriter summary((dir / "sweep_summary.csv").string(),
                    {"lambda", "replica", "status", "samples"});
  for (std::size_t li = 0; li < all_lambdas.size(); ++li) {
    StationaryJob* merged = nullptr;
    for (int r = 0; r < run.sweep.replicas; ++r) {
      StationaryJob& job = jobs[li * std::size_t(run.sweep.replicas) + r];
      summary.row()
          .cell(all_lambdas[li])
          .cell(r)
          .cell(std::string(job.failed ? "failed: " + job.error : "ok"))
          .cell(job.done ? job.stats.count() : 0);
      if (job.failed) {
        all_ok = false;
        continue;
      }
      if (merged == nullptr) {
        merged = &job;
      } else {
        merged->stats.merge(job.stats);
        merged->s2_stats.merge(job.s2_stats);
      }
    }
    if (merged != nullptr)
      panels.push_back({all_lambdas[li], build_panel(*merged)});
  }

  bool have_reference = false;
  for (const auto& [l, p] : panels) have_reference |= (l == lambda0);
  if (have_reference && panels.size() > 1) {
    const std::vector<ConvergenceRow> rows =
        measure_convergence_report(panels, lambda0);
    CsvWriter csv((dir / "convergence.csv").string(),
                  {"observable", "lambda", "mean", "se", "dist", "dist_se"});
    for (const ConvergenceRow& r : rows)
      csv.row()
          .cell(r.observable)
          .cell(r.lambda)
          .cell(r.mean)
          .cell(r.se)
          .cell(r.dist)
          .cell(r.dist_se);
    manifest.artifacts.push_back(
        {"convergence.csv", fnv1a_file((dir / "convergence.csv").string())});
  } else if (!have_reference) {
    all_ok = false;
    std::fprintf(stderr, "pairflow: sweep reference run failed; convergence table skipped\n");
  } else {
    // Single-lambda plan: an empty convergence table, by construction.
    CsvWriter csv((dir / "convergence.csv").string(),
                  {"observable", "lambda", "mean", "se", "dist", "dist_se"});
    manifest.artifacts.push_back(
        {"convergence.csv", fnv1a_file((dir / "convergence.csv").string())});
  }

  manifest.artifacts.push_back(
      {"sweep_summary.csv", fnv1a_file((dir / "sweep_summary.csv").string())});
  write_manifest((dir / "manifest.json").string(), manifest);
  return all_ok;
}

}  // namespace pairflow
