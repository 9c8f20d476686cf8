#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pairflow/lattice.hpp"

namespace pairflow {

using Complex = std::complex<double>;

// Divergence-free velocity field stored as one complex coefficient per
// wavevector: u(x) = sum_k a_k e(k) exp(i 2 pi k.x / L) / L, with e(k) the
// lattice polarization. Incompressibility is structural; realness of u is
// the coefficient symmetry a(-k) = conj(a(k)).
//
// Coefficients live on the dense N x N FFT grid; the zero mode and the
// Nyquist row/column are identically zero.
class SpectralField {
 public:
  explicit SpectralField(const Lattice& lattice)
      : lattice_(&lattice), a_(std::size_t(lattice.grid_size()), Complex{}) {}

  const Lattice& lattice() const { return *lattice_; }

  Complex& at(int k1, int k2) { return a_[lattice_->grid_index(k1, k2)]; }
  Complex at(int k1, int k2) const { return a_[lattice_->grid_index(k1, k2)]; }
  Complex at(Mode m) const { return at(m.k1, m.k2); }

  std::span<Complex> raw() { return a_; }
  std::span<const Complex> raw() const { return a_; }

  // Writes the conjugate pair (k, -k); keeps the field real-valued.
  void assign_pair(int k1, int k2, Complex value) {
    at(k1, k2) = value;
    at(-k1, -k2) = std::conj(value);
  }
  void accumulate_pair(int k1, int k2, Complex value) {
    at(k1, k2) += value;
    at(-k1, -k2) += std::conj(value);
  }

  void clear() { a_.assign(a_.size(), Complex{}); }

  SpectralField& operator+=(const SpectralField& rhs);
  SpectralField& operator-=(const SpectralField& rhs);
  SpectralField& operator*=(double s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    a += b;
    return a;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    a -= b;
    return a;
  }
  friend SpectralField operator*(double s, SpectralField f) {
    f *= s;
    return f;
  }

  bool operator==(const SpectralField& rhs) const {
    return *lattice_ == *rhs.lattice_ && a_ == rhs.a_;
  }

 private:
  const Lattice* lattice_;
  std::vector<Complex> a_;
};

// Real velocity samples on the N x N collocation grid x_ij = (i L/N, j L/N),
// row-major in i.
struct PhysicalField {
  explicit PhysicalField(const Lattice& lattice)
      : lattice(&lattice),
        vx(std::size_t(lattice.grid_size()), 0.0),
        vy(std::size_t(lattice.grid_size()), 0.0) {}
  const Lattice* lattice;
  std::vector<double> vx;
  std::vector<double> vy;
};

// sum_k gamma(k)^(2 alpha) |a_k|^2 over active modes; alpha = 0 is the
// squared H (energy) norm, 1/2 the V (enstrophy) norm, 1 the D(A) norm.
double sobolev_norm_sq(const SpectralField& f, double alpha);

// Real H inner product <f, g> = Re sum_k conj(f_k) g_k.
double h_inner(const SpectralField& f, const SpectralField& g);

double h_norm(const SpectralField& f);
double h_distance(const SpectralField& f, const SpectralField& g);

// Largest coefficient magnitude; NaN-poisoning, used by blow-up checks.
double max_coefficient(const SpectralField& f);

// Component of a per-mode C^2 coefficient array along the divergence-free
// polarization; kernel is the gradient (k-parallel) direction. Idempotent
// and self-adjoint in H. Inputs indexed like the FFT grid.
SpectralField leray_project(const Lattice& lattice, std::span<const Complex> cx,
                            std::span<const Complex> cy);

// Multiplies each coefficient by exp(-nu gamma(k) t); t >= 0, nu > 0.
SpectralField stokes_semigroup(const SpectralField& f, double t, double nu);
void stokes_semigroup_inplace(SpectralField& f, double t, double nu);

// Multiplies each coefficient by gamma(k)^power (A^power, diagonal here).
SpectralField apply_stokes_power(const SpectralField& f, double power);

// Zeroes every mode with max(|k1|,|k2|) > kmax (2/3-rule truncation).
void dealias_inplace(SpectralField& f);
bool dealias_clean(const SpectralField& f);

}  // namespace pairflow
