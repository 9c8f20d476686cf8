#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pairflow/advection.hpp"
#include "pairflow/noise.hpp"

namespace pairflow {

struct NoiseSpec {
  NoiseModel::Kind kind = NoiseModel::Kind::finite_band;
  int modes = 4;
  double q = 1e-3;
  double amplitude = 1.0;
  double exponent = 1.5;

  NoiseModel build(const Lattice& lattice) const;
};

struct InitialMode {
  Mode k;
  Complex a;
};

// Full description of one run of the coupled system
//   du + [nu A u + B(u,u) + lambda B(w,u)] dt = dW1
//   dw + [nu A w + B(u,w) + lambda B(w,w)] dt = dW2
// on the torus.
struct SimulationConfig {
  double nu = 0.02;
  double lambda = 0.0;
  double dt = 0.01;
  double t_final = 1.0;
  int resolution = 64;
  double domain_size = kTwoPi;
  std::uint64_t seed = 1;
  bool burn_in_auto = true;
  double burn_in = 0.0;  // used when burn_in_auto is false
  double observe_interval = 0.1;
  double snapshot_interval = 0.0;  // 0 disables snapshots
  int checkpoint_count = 10;
  bool nonlinear = true;
  std::uint32_t replica = 0;
  std::uint32_t lambda_index = 0;
  NoiseSpec noise;
  std::vector<InitialMode> initial_u;
  std::vector<InitialMode> initial_w;

  // Collects every violation and throws a ConfigError listing all of them.
  void validate() const;

  long long total_steps() const;
};

struct PairState {
  PairState(const Lattice& lattice) : u(lattice), w(lattice), t(0.0) {}
  SpectralField u;
  SpectralField w;
  double t;
};

struct StepperOptions {
  double nu = 0.02;
  double lambda = 0.0;
  double dt = 0.01;
  bool nonlinear = true;
  double noise_scale_u = 1.0;  // scale of the W1 increment on the u equation
  double noise_scale_w = 1.0;  // scale of the W2 increment on the w equation
  double cfl_constant = 0.5;   // heuristic advective bound dt <= c h / u_max
  double cfl_error_factor = 3.0;

  static StepperOptions from(const SimulationConfig& cfg) {
    StepperOptions o;
    o.nu = cfg.nu;
    o.lambda = cfg.lambda;
    o.dt = cfg.dt;
    o.nonlinear = cfg.nonlinear;
    return o;
  }
};

// One exponential Euler-Maruyama step of the pair system: the nonlinear
// drift is evaluated explicitly at the current state through the shared
// advecting velocity s = u + lambda w, the Stokes part is integrated exactly,
// and the noise enters with the exact per-mode stochastic-convolution
// variance:
//   a <- exp(-nu gamma dt) (a - dt bhat) + eta.
// The scheme is affine in (drift, noise), which is what transports the
// algebraic identities of the continuous system to the discrete one.
class PairStepper {
 public:
  PairStepper(const Lattice& lattice, const NoiseModel& model,
              StepperOptions options, NoiseStream stream_u,
              NoiseStream stream_w);

  void step(PairState& state);

  const NoiseStream& stream_u() const { return stream_u_; }
  const NoiseStream& stream_w() const { return stream_w_; }
  void seek_streams(std::uint64_t pos_u, std::uint64_t pos_w) {
    stream_u_.seek(pos_u);
    stream_w_.seek(pos_w);
  }

  // Noise fields added by the most recent step (Ito pairing diagnostics).
  const SpectralField& last_noise_u() const { return eta_u_; }
  const SpectralField& last_noise_w() const { return eta_w_; }
  double last_max_speed() const { return last_max_speed_; }
  bool cfl_warned() const { return cfl_warned_; }

  AdvectionOperator& advection() { return advection_; }

 private:
  void check_stability(double max_speed, double t);

  const Lattice* lattice_;
  const NoiseModel* model_;
  StepperOptions options_;
  NoiseStream stream_u_;
  NoiseStream stream_w_;
  AdvectionOperator advection_;
  std::vector<double> decay_;  // exp(-nu gamma dt) per active mode
  SpectralField eta_u_, eta_w_;
  double last_max_speed_ = 0.0;
  bool cfl_warned_ = false;
};

// Same scheme for the single-field equation
//   du + [nu A u + B(u,u)] dt = s1 dW1 + s2 dW2,
// consuming the same stream increments as a PairStepper with aligned
// positions would; with s1 = 1, s2 = lambda this realizes the combined
// forcing of the u + lambda w reduction.
class SingleStepper {
 public:
  SingleStepper(const Lattice& lattice, const NoiseModel& model,
                StepperOptions options, NoiseStream stream1,
                NoiseStream stream2);

  void step(SpectralField& u, double& t);

  const NoiseStream& stream1() const { return stream1_; }
  const NoiseStream& stream2() const { return stream2_; }

 private:
  const Lattice* lattice_;
  const NoiseModel* model_;
  StepperOptions options_;
  NoiseStream stream1_;
  NoiseStream stream2_;
  AdvectionOperator advection_;
  std::vector<double> decay_;
  SpectralField eta_;
  bool cfl_warned_ = false;
};

struct IntegrationHooks {
  std::function<void(const PairState&)> observe;
  std::function<void(const PairState&)> snapshot;
  std::function<void(const PairState&, const PairStepper&, int index)>
      checkpoint;
  // Every step, including burn-in; receives the applied noise increments.
  std::function<void(const PairState&, const SpectralField& eta_u,
                     const SpectralField& eta_w)>
      after_step;
};

struct IntegrationResult {
  double burn_in_used = 0.0;
  double eddy_turnover = 0.0;
  long long observations = 0;
  long long steps = 0;
};

// Burn-in phase followed by the measurement phase with observers invoked at
// the configured cadence. Deterministic for a fixed seed.
IntegrationResult integrate(const SimulationConfig& cfg, PairState& state,
                            const IntegrationHooks& hooks = {});

// Builds the lattice-ready initial state (mean-zero spectra from the config).
PairState initial_state(const SimulationConfig& cfg, const Lattice& lattice);

// Eddy-turnover estimate 1/sqrt(mean enstrophy of u) from a pilot window of
// the given duration; runs its own short integration.
double estimate_eddy_turnover(const SimulationConfig& cfg);

}  // namespace pairflow
