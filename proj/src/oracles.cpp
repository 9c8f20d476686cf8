#include "pairflow/oracles.hpp"

#include <cmath>

#include "pairflow/errors.hpp"

namespace pairflow {

ReductionResult reduction_oracle(const SimulationConfig& cfg, int n_steps) {
  const Lattice lattice(cfg.resolution, cfg.domain_size);
  const NoiseModel model = cfg.noise.build(lattice);
  const double lambda = cfg.lambda;

  PairState pair = initial_state(cfg, lattice);
  SpectralField q = pair.u;
  for (const Mode& m : lattice.modes())
    q.at(m.k1, m.k2) += lambda * pair.w.at(m);

  const StreamId id_u{0, cfg.replica, cfg.lambda_index};
  const StreamId id_w{1, cfg.replica, cfg.lambda_index};
  PairStepper pair_stepper(lattice, model, StepperOptions::from(cfg),
                           NoiseStream(cfg.seed, id_u),
                           NoiseStream(cfg.seed, id_w));
  StepperOptions single_opts = StepperOptions::from(cfg);
  single_opts.lambda = 0.0;
  single_opts.noise_scale_u = 1.0;
  single_opts.noise_scale_w = lambda;
  SingleStepper single_stepper(lattice, model, single_opts,
                               NoiseStream(cfg.seed, id_u),
                               NoiseStream(cfg.seed, id_w));

  ReductionResult result;
  double tq = pair.t;
  for (int s = 0; s < n_steps; ++s) {
    pair_stepper.step(pair);
    single_stepper.step(q, tq);
    double dist_sq = 0.0;
    for (const Mode& m : lattice.modes())
      dist_sq += std::norm(q.at(m) - (pair.u.at(m) + lambda * pair.w.at(m)));
    result.max_distance = std::max(result.max_distance, std::sqrt(dist_sq));
    result.max_state_norm =
        std::max({result.max_state_norm, h_norm(q), h_norm(pair.u),
                  h_norm(pair.w)});
  }
  return result;
}

ReductionResult symmetric_form_oracle(const SimulationConfig& cfg,
                                      int n_steps) {
  if (cfg.lambda == 0.0)
    throw ConfigError(
        "symmetric-form oracle: the change of variables v = lambda w "
        "degenerates at lambda = 0");
  const Lattice lattice(cfg.resolution, cfg.domain_size);
  const NoiseModel model = cfg.noise.build(lattice);
  const double lambda = cfg.lambda;

  PairState pair = initial_state(cfg, lattice);
  PairState sym(lattice);
  sym.u = pair.u;
  sym.w = pair.w;
  sym.w *= lambda;  // v = lambda w

  const StreamId id_u{0, cfg.replica, cfg.lambda_index};
  const StreamId id_w{1, cfg.replica, cfg.lambda_index};
  PairStepper pair_stepper(lattice, model, StepperOptions::from(cfg),
                           NoiseStream(cfg.seed, id_u),
                           NoiseStream(cfg.seed, id_w));
  // The (u, v) system is the unit-coupling pair equation with the second
  // forcing scaled by lambda.
  StepperOptions sym_opts = StepperOptions::from(cfg);
  sym_opts.lambda = 1.0;
  sym_opts.noise_scale_w = lambda;
  PairStepper sym_stepper(lattice, model, sym_opts, NoiseStream(cfg.seed, id_u),
                          NoiseStream(cfg.seed, id_w));

  ReductionResult result;
  for (int s = 0; s < n_steps; ++s) {
    pair_stepper.step(pair);
    sym_stepper.step(sym);
    double dist_sq = 0.0;
    for (const Mode& m : lattice.modes()) {
      dist_sq += std::norm(sym.u.at(m) - pair.u.at(m));
      dist_sq += std::norm(sym.w.at(m) - lambda * pair.w.at(m));
    }
    result.max_distance = std::max(result.max_distance, std::sqrt(dist_sq));
    result.max_state_norm = std::max(
        {result.max_state_norm, h_norm(pair.u), h_norm(sym.w), h_norm(sym.u)});
  }
  return result;
}

std::vector<SweepDistance> lambda_sweep_distances(
    const SimulationConfig& base, const std::vector<double>& lambdas,
    double lambda0, int n_steps) {
  std::vector<SweepDistance> table;
  table.reserve(lambdas.size());
  for (double lambda : lambdas) {
    SweepDistance row;
    row.lambda = lambda;
    try {
      const Lattice lattice(base.resolution, base.domain_size);
      const NoiseModel model = base.noise.build(lattice);
      const StreamId id_u{0, base.replica, base.lambda_index};
      const StreamId id_w{1, base.replica, base.lambda_index};

      PairState state_l = initial_state(base, lattice);
      PairState state_0 = initial_state(base, lattice);
      StepperOptions opts_l = StepperOptions::from(base);
      opts_l.lambda = lambda;
      StepperOptions opts_0 = StepperOptions::from(base);
      opts_0.lambda = lambda0;
      PairStepper step_l(lattice, model, opts_l, NoiseStream(base.seed, id_u),
                         NoiseStream(base.seed, id_w));
      PairStepper step_0(lattice, model, opts_0, NoiseStream(base.seed, id_u),
                         NoiseStream(base.seed, id_w));
      for (int s = 0; s < n_steps; ++s) {
        step_l.step(state_l);
        step_0.step(state_0);
        row.max_du = std::max(row.max_du, h_distance(state_l.u, state_0.u));
        row.max_dw = std::max(row.max_dw, h_distance(state_l.w, state_0.w));
      }
    } catch (const NumericsError& e) {
      row.failed = true;
      row.error = e.what();
    }
    table.push_back(row);
  }
  return table;
}

}  // namespace pairflow
