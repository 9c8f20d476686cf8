#pragma once

#include "pairflow/dynamics.hpp"

namespace pairflow {

struct ReductionResult {
  double max_distance = 0.0;   // max over steps of |q - (u + lambda w)|_H
  double max_state_norm = 0.0;  // largest H-norm seen, for relative bounds
};

// Runs the pair system and the single equation with combined forcing
// dW1 + lambda dW2 side by side from consistent data (q0 = u0 + lambda w0)
// on identical noise paths. Because the drift is bilinear and the scheme is
// affine, q(t) = u(t) + lambda w(t) holds step by step up to rounding.
ReductionResult reduction_oracle(const SimulationConfig& cfg, int n_steps);

// Integrates the pair system and, separately, the symmetric change of
// variables (u, v = lambda w) whose second equation carries the scaled
// forcing lambda dW2, and returns the max H-distance between the two
// trajectories mapped onto each other. lambda must be nonzero.
ReductionResult symmetric_form_oracle(const SimulationConfig& cfg,
                                      int n_steps);

struct SweepDistance {
  double lambda = 0.0;
  double max_du = 0.0;  // sup_t |u^lambda - u^lambda0|_H
  double max_dw = 0.0;  // sup_t |w^lambda - w^lambda0|_H
  bool failed = false;
  std::string error;
};

// Shared-noise trajectory distances e(lambda) against the reference lambda0:
// every run reuses the same (seed, stream identities) so the noise paths
// coincide pathwise.
std::vector<SweepDistance> lambda_sweep_distances(
    const SimulationConfig& base, const std::vector<double>& lambdas,
    double lambda0, int n_steps);

}  // namespace pairflow
