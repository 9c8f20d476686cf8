#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace pairflow {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Mode {
  int k1;
  int k2;
  bool operator==(const Mode&) const = default;
};

// Fourier lattice for mean-zero divergence-free fields on the periodic box
// [0,L)^2, discretized on an N x N collocation grid.
//
// Active wavevectors are k = (k1,k2) with |k_i| <= N/2 - 1 and k != 0; the
// set is closed under k -> -k and maps one-to-one onto FFT bins with the
// Nyquist row/column left empty (a populated Nyquist mode cannot satisfy the
// reality constraint pair-wise). Quadratic products are dealiased by zeroing
// every mode with max(|k1|,|k2|) > kmax() = floor(N/3).
class Lattice {
 public:
  explicit Lattice(int resolution, double domain_size = kTwoPi);

  int n() const { return n_; }
  double length() const { return length_; }
  int kmax() const { return kmax_; }
  int half() const { return n_ / 2 - 1; }  // largest stored |k_i|
  int grid_size() const { return n_ * n_; }

  // Row-major FFT-layout index of wavevector (k1, k2).
  int grid_index(int k1, int k2) const {
    const int i = k1 >= 0 ? k1 : k1 + n_;
    const int j = k2 >= 0 ? k2 : k2 + n_;
    return i * n_ + j;
  }

  // Stokes eigenvalue |2 pi k / L|^2; strictly positive on active modes.
  double gamma(int k1, int k2) const {
    const double f = kTwoPi / length_;
    return f * f * double(k1 * k1 + k2 * k2);
  }
  double gamma(Mode m) const { return gamma(m.k1, m.k2); }

  // Divergence-free unit polarization e(k) = s(k) * (-k2, k1)/|k| with the
  // sign s(k) = -s(-k) chosen on the canonical half so that e(-k) = e(k);
  // with that convention realness of the field reads a(-k) = conj(a(k)).
  void polarization(int k1, int k2, double& e1, double& e2) const;

  static bool canonical(int k1, int k2) {
    return k1 > 0 || (k1 == 0 && k2 > 0);
  }

  // All active modes, fixed enumeration order.
  const std::vector<Mode>& modes() const { return modes_; }
  // One representative per conjugate pair, sorted by (gamma, k1, k2); this
  // order defines the scalar eigenvalue index used by noise spectra and the
  // per-mode lane of the counter RNG.
  const std::vector<Mode>& canonical_modes() const { return canonical_; }

  bool active(int k1, int k2) const {
    const int h = half();
    return (k1 != 0 || k2 != 0) && k1 >= -h && k1 <= h && k2 >= -h && k2 <= h;
  }
  bool in_dealias_band(int k1, int k2) const {
    return std::abs(k1) <= kmax_ && std::abs(k2) <= kmax_;
  }

  bool operator==(const Lattice& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }

  // Grid-indexed caches for the hot loops; zero on inactive bins (the mean
  // mode and the Nyquist row/column).
  const std::vector<double>& wave_x() const { return wave_x_; }
  const std::vector<double>& wave_y() const { return wave_y_; }
  const std::vector<double>& pol_x() const { return pol_x_; }
  const std::vector<double>& pol_y() const { return pol_y_; }
  const std::vector<double>& gamma_grid() const { return gamma_grid_; }
  const std::vector<unsigned char>& active_grid() const { return active_grid_; }
  const std::vector<unsigned char>& band_grid() const { return band_grid_; }

 private:
  int n_;
  double length_;
  int kmax_;
  std::vector<Mode> modes_;
  std::vector<Mode> canonical_;
  std::vector<double> wave_x_, wave_y_, pol_x_, pol_y_, gamma_grid_;
  std::vector<unsigned char> active_grid_, band_grid_;
};

}  // namespace pairflow
