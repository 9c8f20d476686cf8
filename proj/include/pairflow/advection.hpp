#pragma once

#include "pairflow/fourier.hpp"

namespace pairflow {

// Pseudo-spectral advection operator B(u, v) = P[(u . grad) v]: transform to
// collocation space, form the pointwise product, transform back, zero all
// modes beyond the 2/3-rule cutoff, project onto the divergence-free part.
// Bilinear in both arguments; with inputs supported inside the dealias band
// the in-band result equals the exact spectral convolution.
class AdvectionOperator {
 public:
  explicit AdvectionOperator(const Lattice& lattice);

  // One-shot B(u, v). Throws on lattice mismatch.
  SpectralField apply(const SpectralField& u, const SpectralField& v);

  // Split pipeline: load the advecting velocity once, then advect several
  // fields against it (a time step needs B(s, u) and B(s, w) for one s).
  void set_advecting(const SpectralField& s);
  SpectralField advect(const SpectralField& v);

  // Largest collocation speed component of the current advecting field;
  // feeds the advective time-step bound.
  double advecting_max_speed() const { return max_speed_; }

 private:
  const Lattice* lattice_;
  FourierWorkspace ws_;
  std::vector<double> sx_, sy_;
  std::vector<Complex> grid_a_, grid_b_, gx_, gy_, prod_;
  std::vector<std::pair<int, int>> band_pairs_;  // (k, -k) grid indices
  double max_speed_ = 0.0;
  bool loaded_ = false;
};

}  // namespace pairflow
