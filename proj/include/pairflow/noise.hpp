#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pairflow/rng.hpp"
#include "pairflow/spectral_field.hpp"

namespace pairflow {

// Diagonal covariance of the spectral Wiener forcing: one variance q >= 0
// per conjugate mode pair, q(-k) = q(k). Either a finite band (finitely many
// forced modes) or a power-law spectrum q_j = C j^-a, 1 < a < 2, in the
// sorted-eigenvalue index j; wavevectors in the same Stokes shell share one
// q. Forcing is restricted to the dealias band.
class NoiseModel {
 public:
  enum class Kind { finite_band, power_law };

  // Forces the first `mode_count` canonical modes (sorted by shell) with a
  // flat variance q.
  static NoiseModel finite_band(const Lattice& lattice, int mode_count,
                                double q);
  // q_j = amplitude * j^-exponent with the shell-sharing rule.
  static NoiseModel power_law(const Lattice& lattice, double amplitude,
                              double exponent);
  static NoiseModel silent(const Lattice& lattice) {
    return finite_band(lattice, 0, 0.0);
  }

  const Lattice& lattice() const { return *lattice_; }
  Kind kind() const { return kind_; }

  // Variance of the canonical mode with the given sorted index.
  double q(std::size_t canonical_index) const { return q_[canonical_index]; }
  const std::vector<double>& q() const { return q_; }

  // Traces over the full lattice: conjugate pairs count twice.
  double trace_q() const { return trace_q_; }
  double trace_aq() const { return trace_aq_; }

  // Supremum of admissible regularity exponents alpha0 with
  // sum q_j gamma_j^(2 alpha0) finite in the continuum limit; finite-band
  // spectra admit every alpha0 (returns +inf).
  double alpha0_sup() const;

  double amplitude() const { return amplitude_; }
  double exponent() const { return exponent_; }
  int band_count() const { return band_count_; }

  std::uint64_t hash() const;

 private:
  NoiseModel(const Lattice& lattice, Kind kind);

  const Lattice* lattice_;
  Kind kind_;
  std::vector<double> q_;
  double trace_q_ = 0.0;
  double trace_aq_ = 0.0;
  double amplitude_ = 0.0;
  double exponent_ = 0.0;
  int band_count_ = 0;
};

struct SpectrumRow {
  Mode mode;
  double gamma;
  double q;
};

struct SpectrumReport {
  std::vector<SpectrumRow> rows;  // forced canonical modes, sorted order
  double trace_q;
  double trace_aq;
  double alpha0_sup;  // +inf for finite band
  std::string regularity_note;
};

SpectrumReport spectrum_report(const NoiseModel& model);

// Identity of one scalar Wiener process within the run: which forcing
// component it drives, the replica it belongs to, and the sweep slot (kept
// equal across a shared-noise sweep so paths coincide pathwise).
struct StreamId {
  std::uint32_t component = 0;  // 0 -> W1 (u equation), 1 -> W2 (w equation)
  std::uint32_t replica = 0;
  std::uint32_t lambda_index = 0;

  std::uint32_t tag() const;
};

// Seeded, positioned view into a family of per-mode Gaussian sequences.
// Identical (seed, id, position) reproduces identical draws bitwise; streams
// with different identities are independent.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, StreamId id)
      : seed_(seed), id_(id), position_(0) {}

  std::uint64_t seed() const { return seed_; }
  StreamId id() const { return id_; }
  std::uint64_t position() const { return position_; }
  void seek(std::uint64_t position) { position_ = position; }
  void advance() { ++position_; }

  // Unit complex Gaussian (independent N(0,1) real and imaginary parts) for
  // one canonical mode at the current position.
  Complex unit_gaussian(std::uint32_t canonical_index) const {
    const NormalPair z =
        counter_normals(seed_, id_.tag(), position_, canonical_index);
    return {z.z0, z.z1};
  }

 private:
  std::uint64_t seed_;
  StreamId id_;
  std::uint64_t position_;
};

// Wiener increment over dt: independent complex Gaussian per forced mode
// with E|dW_k|^2 = q_k dt, conjugate pair driven by the same draw. Consumes
// one stream position.
SpectralField wiener_increment(NoiseStream& stream, const NoiseModel& model,
                               double dt);

// Stochastic-convolution noise: per-mode complex Gaussian with the exact
// Ornstein-Uhlenbeck variance q_k (1 - exp(-2 nu gamma dt)) / (2 nu gamma),
// scaled by `scale`, accumulated into `out`. Consumes one stream position.
void accumulate_ou_noise(SpectralField& out, NoiseStream& stream,
                         const NoiseModel& model, double nu, double dt,
                         double scale = 1.0);

// Exact distributional OU transition z <- exp(-nu gamma dt) z + eta.
void ou_step(SpectralField& z, NoiseStream& stream, const NoiseModel& model,
             double nu, double dt);

}  // namespace pairflow
