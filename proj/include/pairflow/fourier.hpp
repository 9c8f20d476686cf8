#pragma once

#include <memory>

#include "pairflow/spectral_field.hpp"

namespace pairflow {

// FFT scratch space plus plans for one lattice size. Plan creation and
// destruction are serialized internally (FFTW requirement); execution uses
// only this object's buffers, so distinct workspaces can run concurrently.
// Plans use FFTW_ESTIMATE: planning is then deterministic and transforms are
// bitwise reproducible for identical input.
class FourierWorkspace {
 public:
  explicit FourierWorkspace(const Lattice& lattice);
  ~FourierWorkspace();
  FourierWorkspace(const FourierWorkspace&) = delete;
  FourierWorkspace& operator=(const FourierWorkspace&) = delete;

  const Lattice& lattice() const { return *lattice_; }

  PhysicalField to_physical(const SpectralField& f);
  // Forward transform composed with the Leray projection; the gradient part,
  // the mean and any Nyquist content are discarded, and the coefficients are
  // Hermitian-symmetrized so the result is exactly real-valued.
  SpectralField to_spectral(const PhysicalField& g);

  // Largest |imaginary part| discarded by the last to_physical call,
  // relative to the field scale; stays at rounding level for valid fields.
  double last_imag_residue() const { return last_imag_residue_; }

  // Component grids of a field (hat u_c(k) = a_k e_c(k)), written into
  // caller-visible scratch; used by the advection pipeline.
  void component_grids(const SpectralField& f, std::span<Complex> cx,
                       std::span<Complex> cy) const;

  // Unnormalized backward/forward DFTs on n x n complex grids.
  void backward(std::span<const Complex> in, std::span<Complex> out);
  void forward(std::span<const Complex> in, std::span<Complex> out);

 private:
  struct Impl;
  const Lattice* lattice_;
  std::unique_ptr<Impl> impl_;
  double last_imag_residue_ = 0.0;
};

}  // namespace pairflow
