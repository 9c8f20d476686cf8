#include "pairflow/dynamics.hpp"

#include <cmath>
#include <cstdio>

#include "pairflow/errors.hpp"

namespace pairflow {

NoiseModel NoiseSpec::build(const Lattice& lattice) const {
  switch (kind) {
    case NoiseModel::Kind::finite_band:
      return NoiseModel::finite_band(lattice, modes, q);
    case NoiseModel::Kind::power_law:
      return NoiseModel::power_law(lattice, amplitude, exponent);
  }
  throw ConfigError("noise.kind: unknown noise kind");
}

void SimulationConfig::validate() const {
  std::vector<std::string> issues;
  if (!(nu > 0.0)) issues.push_back("simulation.nu must be > 0");
  if (!(dt > 0.0)) issues.push_back("simulation.dt must be > 0");
  if (!(t_final >= dt))
    issues.push_back("simulation.t_final must be at least one step long");
  if (resolution < 16 || resolution % 2 != 0)
    issues.push_back("simulation.resolution must be an even integer >= 16");
  if (!(domain_size > 0.0))
    issues.push_back("simulation.domain_size must be > 0");
  if (!burn_in_auto && burn_in < 0.0)
    issues.push_back("simulation.burn_in must be >= 0 or 'auto'");
  if (!(observe_interval > 0.0))
    issues.push_back("simulation.observe_interval must be > 0");
  if (snapshot_interval < 0.0)
    issues.push_back("simulation.snapshot_interval must be >= 0");
  if (checkpoint_count < 0)
    issues.push_back("simulation.checkpoints must be >= 0");
  if (noise.kind == NoiseModel::Kind::finite_band) {
    if (noise.modes < 0) issues.push_back("noise.modes must be >= 0");
    if (noise.q < 0.0) issues.push_back("noise.q must be >= 0");
  } else {
    if (!(noise.exponent > 1.0 && noise.exponent < 2.0))
      issues.push_back(
          "noise.exponent: power-law decay a must satisfy 1 < a < 2");
    if (noise.amplitude < 0.0) issues.push_back("noise.amplitude must be >= 0");
  }
  if (resolution >= 4) {
    // initial data must live inside the dealiased band so that states stay
    // dealiased at every step
    const int kmax = resolution / 3;
    for (const auto& list : {initial_u, initial_w})
      for (const InitialMode& im : list)
        if ((im.k.k1 == 0 && im.k.k2 == 0) || std::abs(im.k.k1) > kmax ||
            std::abs(im.k.k2) > kmax)
          issues.push_back("initial mode (" + std::to_string(im.k.k1) + "," +
                           std::to_string(im.k.k2) +
                           ") is outside the dealiased band (|k_i| <= " +
                           std::to_string(kmax) + ")");
  }
  if (!issues.empty()) {
    std::string what = "invalid configuration:";
    for (const std::string& s : issues) what += "\n  - " + s;
    throw ConfigError(what, issues);
  }
}

long long SimulationConfig::total_steps() const {
  return std::llround(t_final / dt);
}

namespace {

// exp(-nu gamma dt) per grid bin; zero at inactive bins so the update loop
// keeps them identically zero.
std::vector<double> decay_table(const Lattice& lat, double nu, double dt) {
  std::vector<double> d(std::size_t(lat.grid_size()), 0.0);
  for (const Mode& m : lat.modes()) {
    const std::size_t idx = std::size_t(lat.grid_index(m.k1, m.k2));
    d[idx] = std::exp(-nu * lat.gamma_grid()[idx] * dt);
  }
  return d;
}

}  // namespace

PairStepper::PairStepper(const Lattice& lattice, const NoiseModel& model,
                         StepperOptions options, NoiseStream stream_u,
                         NoiseStream stream_w)
    : lattice_(&lattice),
      model_(&model),
      options_(options),
      stream_u_(stream_u),
      stream_w_(stream_w),
      advection_(lattice),
      decay_(decay_table(lattice, options.nu, options.dt)),
      eta_u_(lattice),
      eta_w_(lattice) {
  if (!(options_.nu > 0.0)) throw ConfigError("stepper: nu must be > 0");
  if (!(options_.dt > 0.0)) throw ConfigError("stepper: dt must be > 0");
}

void PairStepper::check_stability(double max_speed, double t) {
  if (max_speed <= 0.0) return;
  const double h = lattice_->length() / lattice_->n();
  const double bound = options_.cfl_constant * h / max_speed;
  if (options_.dt > options_.cfl_error_factor * bound) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "advective stability violated at t=%.6g: dt=%.3g exceeds "
                  "%.1fx the bound %.3g (u_max=%.3g)",
                  t, options_.dt, options_.cfl_error_factor, bound, max_speed);
    throw NumericsError(buf);
  }
  if (options_.dt > bound && !cfl_warned_) {
    std::fprintf(stderr,
                 "pairflow: warning: dt=%.3g exceeds the advective bound "
                 "%.3g (c=%.2f, u_max=%.3g) at t=%.6g\n",
                 options_.dt, bound, options_.cfl_constant, max_speed, t);
    cfl_warned_ = true;
  }
}

void PairStepper::step(PairState& state) {
  const Lattice& lat = *lattice_;
  const double dt = options_.dt;
  const double lambda = options_.lambda;

  SpectralField drift_u(lat), drift_w(lat);
  if (options_.nonlinear) {
    if (lambda == 0.0) {
      advection_.set_advecting(state.u);
    } else {
      SpectralField s = state.u;
      std::span<Complex> sr = s.raw();
      std::span<const Complex> wr = state.w.raw();
      for (std::size_t i = 0; i < sr.size(); ++i) sr[i] += lambda * wr[i];
      advection_.set_advecting(s);
    }
    last_max_speed_ = advection_.advecting_max_speed();
    check_stability(last_max_speed_, state.t);
    drift_u = advection_.advect(state.u);
    drift_w = advection_.advect(state.w);
  }

  eta_u_.clear();
  eta_w_.clear();
  accumulate_ou_noise(eta_u_, stream_u_, *model_, options_.nu, dt,
                      options_.noise_scale_u);
  accumulate_ou_noise(eta_w_, stream_w_, *model_, options_.nu, dt,
                      options_.noise_scale_w);

  std::span<Complex> u = state.u.raw();
  std::span<Complex> w = state.w.raw();
  std::span<const Complex> du = drift_u.raw();
  std::span<const Complex> dw = drift_w.raw();
  std::span<const Complex> nu_field = eta_u_.raw();
  std::span<const Complex> nw_field = eta_w_.raw();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double decay = decay_[i];
    u[i] = decay * (u[i] - dt * du[i]) + nu_field[i];
    w[i] = decay * (w[i] - dt * dw[i]) + nw_field[i];
  }
  state.t += dt;

  const double worst_u = max_coefficient(state.u);
  const double worst_w = max_coefficient(state.w);
  if (!std::isfinite(worst_u) || !std::isfinite(worst_w)) {
    const double worst = std::isfinite(worst_u) ? worst_w : worst_u;
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "trajectory blew up at t=%.6g (max |a_k|=%g); dt too large",
                  state.t, worst);
    throw BlowUpError(buf, state.t, worst);
  }
}

SingleStepper::SingleStepper(const Lattice& lattice, const NoiseModel& model,
                             StepperOptions options, NoiseStream stream1,
                             NoiseStream stream2)
    : lattice_(&lattice),
      model_(&model),
      options_(options),
      stream1_(stream1),
      stream2_(stream2),
      advection_(lattice),
      decay_(decay_table(lattice, options.nu, options.dt)),
      eta_(lattice) {}

void SingleStepper::step(SpectralField& u, double& t) {
  const Lattice& lat = *lattice_;
  const double dt = options_.dt;

  SpectralField drift(lat);
  if (options_.nonlinear) {
    advection_.set_advecting(u);
    const double max_speed = advection_.advecting_max_speed();
    const double h = lat.length() / lat.n();
    if (max_speed > 0.0 && dt > options_.cfl_constant * h / max_speed &&
        !cfl_warned_) {
      std::fprintf(stderr, "pairflow: warning: single-field dt exceeds the advective bound\n");
      cfl_warned_ = true;
    }
    drift = advection_.advect(u);
  }

  eta_.clear();
  accumulate_ou_noise(eta_, stream1_, *model_, options_.nu, dt,
                      options_.noise_scale_u);
  accumulate_ou_noise(eta_, stream2_, *model_, options_.nu, dt,
                      options_.noise_scale_w);

  std::span<Complex> a = u.raw();
  std::span<const Complex> d = drift.raw();
  std::span<const Complex> n = eta_.raw();
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = decay_[i] * (a[i] - dt * d[i]) + n[i];
  t += dt;

  const double worst = max_coefficient(u);
  if (!std::isfinite(worst))
    throw BlowUpError("single-field trajectory blew up", t, worst);
}

PairState initial_state(const SimulationConfig& cfg, const Lattice& lattice) {
  PairState state(lattice);
  for (const InitialMode& im : cfg.initial_u)
    state.u.assign_pair(im.k.k1, im.k.k2, im.a);
  for (const InitialMode& im : cfg.initial_w)
    state.w.assign_pair(im.k.k1, im.k.k2, im.a);
  return state;
}

IntegrationResult integrate(const SimulationConfig& cfg, PairState& state,
                            const IntegrationHooks& hooks) {
  const Lattice& lat = state.u.lattice();
  const NoiseModel model = cfg.noise.build(lat);
  PairStepper stepper(lat, model, StepperOptions::from(cfg),
                      NoiseStream(cfg.seed, {0, cfg.replica, cfg.lambda_index}),
                      NoiseStream(cfg.seed, {1, cfg.replica, cfg.lambda_index}));

  const long long total = cfg.total_steps();
  const long long observe_every =
      std::max(1ll, std::llround(cfg.observe_interval / cfg.dt));
  const long long snapshot_every =
      cfg.snapshot_interval > 0.0
          ? std::max(1ll, std::llround(cfg.snapshot_interval / cfg.dt))
          : 0;

  IntegrationResult result;

  // Burn-in: either the configured duration or the pilot rule
  // min(20% of horizon, 50 eddy turnovers), with the turnover time taken
  // as 1/sqrt(mean enstrophy of u) over the pilot window.
  long long burn_steps = 0;
  if (cfg.burn_in_auto) {
    const long long pilot = std::min(total, std::max(200ll, total / 50));
    double mean_v2 = 0.0;
    for (long long s = 0; s < pilot; ++s) {
      stepper.step(state);
      if (hooks.after_step)
        hooks.after_step(state, stepper.last_noise_u(), stepper.last_noise_w());
      mean_v2 += sobolev_norm_sq(state.u, 0.5);
    }
    mean_v2 /= double(pilot);
    const double tau = mean_v2 > 0.0
                           ? 1.0 / std::sqrt(mean_v2)
                           : std::numeric_limits<double>::infinity();
    result.eddy_turnover = tau;
    const double burn_time = std::min(0.2 * cfg.t_final, 50.0 * tau);
    burn_steps = std::max(pilot, std::llround(burn_time / cfg.dt));
    burn_steps = std::min(burn_steps, total);
    for (long long s = pilot; s < burn_steps; ++s) {
      stepper.step(state);
      if (hooks.after_step)
        hooks.after_step(state, stepper.last_noise_u(), stepper.last_noise_w());
    }
  } else {
    burn_steps = std::min(total, std::llround(cfg.burn_in / cfg.dt));
    for (long long s = 0; s < burn_steps; ++s) {
      stepper.step(state);
      if (hooks.after_step)
        hooks.after_step(state, stepper.last_noise_u(), stepper.last_noise_w());
    }
  }
  result.burn_in_used = double(burn_steps) * cfg.dt;

  const long long measure_steps = total - burn_steps;
  const long long checkpoint_every =
      cfg.checkpoint_count > 0
          ? std::max(1ll, total / cfg.checkpoint_count)
          : 0;

  for (long long s = 1; s <= measure_steps; ++s) {
    stepper.step(state);
    ++result.steps;
    if (hooks.after_step)
      hooks.after_step(state, stepper.last_noise_u(), stepper.last_noise_w());
    const long long global_step = burn_steps + s;
    if (hooks.observe && s % observe_every == 0) {
      hooks.observe(state);
      ++result.observations;
    }
    if (hooks.snapshot && snapshot_every > 0 && s % snapshot_every == 0)
      hooks.snapshot(state);
    if (hooks.checkpoint && checkpoint_every > 0 &&
        global_step % checkpoint_every == 0)
      hooks.checkpoint(state, stepper, int(global_step / checkpoint_every));
  }
  result.steps += burn_steps;
  return result;
}

double estimate_eddy_turnover(const SimulationConfig& cfg) {
  const Lattice lattice(cfg.resolution, cfg.domain_size);
  PairState state = initial_state(cfg, lattice);
  const NoiseModel model = cfg.noise.build(lattice);
  PairStepper stepper(lattice, model, StepperOptions::from(cfg),
                      NoiseStream(cfg.seed, {0, cfg.replica, cfg.lambda_index}),
                      NoiseStream(cfg.seed, {1, cfg.replica, cfg.lambda_index}));
  const long long pilot = std::max(200ll, cfg.total_steps() / 50);
  double mean_v2 = 0.0;
  for (long long s = 0; s < pilot; ++s) {
    stepper.step(state);
    mean_v2 += sobolev_norm_sq(state.u, 0.5);
  }
  mean_v2 /= double(pilot);
  return mean_v2 > 0.0 ? 1.0 / std::sqrt(mean_v2)
                       : std::numeric_limits<double>::infinity();
}

}  // namespace pairflow
