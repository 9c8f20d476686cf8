#include "pairflow/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace pairflow {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FourierWorkspace::Impl {
  fftw_complex* in;
  fftw_complex* out;
  fftw_plan forward;
  fftw_plan backward;
  int n;

  explicit Impl(int n_) : n(n_) {
    std::lock_guard lock(plan_mutex());
    in = fftw_alloc_complex(std::size_t(n) * n);
    out = fftw_alloc_complex(std::size_t(n) * n);
    forward = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(in);
    fftw_free(out);
  }
};

FourierWorkspace::FourierWorkspace(const Lattice& lattice)
    : lattice_(&lattice), impl_(std::make_unique<Impl>(lattice.n())) {}

FourierWorkspace::~FourierWorkspace() = default;

void FourierWorkspace::backward(std::span<const Complex> in,
                                std::span<Complex> out) {
  // std::complex<double> is layout-compatible with fftw_complex
  const std::size_t sz = std::size_t(impl_->n) * impl_->n;
  std::memcpy(impl_->in, in.data(), sz * sizeof(Complex));
  fftw_execute(impl_->backward);
  std::memcpy(reinterpret_cast<double*>(out.data()), impl_->out,
              sz * sizeof(Complex));
}

void FourierWorkspace::forward(std::span<const Complex> in,
                               std::span<Complex> out) {
  const std::size_t sz = std::size_t(impl_->n) * impl_->n;
  std::memcpy(impl_->in, in.data(), sz * sizeof(Complex));
  fftw_execute(impl_->forward);
  std::memcpy(reinterpret_cast<double*>(out.data()), impl_->out,
              sz * sizeof(Complex));
}

void FourierWorkspace::component_grids(const SpectralField& f,
                                       std::span<Complex> cx,
                                       std::span<Complex> cy) const {
  const Lattice& lat = *lattice_;
  const std::span<const Complex> a = f.raw();
  const std::vector<double>& e1 = lat.pol_x();
  const std::vector<double>& e2 = lat.pol_y();
  for (std::size_t i = 0; i < a.size(); ++i) {
    cx[i] = a[i] * e1[i];
    cy[i] = a[i] * e2[i];
  }
}

PhysicalField FourierWorkspace::to_physical(const SpectralField& f) {
  const Lattice& lat = *lattice_;
  const std::size_t sz = std::size_t(lat.grid_size());
  std::vector<Complex> grid(sz), phys(sz);
  PhysicalField g(lat);

  double residue = 0.0;
  double scale = 0.0;
  const double inv_length = 1.0 / lat.length();

  for (int comp = 0; comp < 2; ++comp) {
    const std::vector<double>& pol = comp == 0 ? lat.pol_x() : lat.pol_y();
    const std::span<const Complex> a = f.raw();
    for (std::size_t i = 0; i < sz; ++i) grid[i] = a[i] * pol[i];
    backward(grid, phys);
    std::vector<double>& target = comp == 0 ? g.vx : g.vy;
    for (std::size_t i = 0; i < sz; ++i) {
      target[i] = phys[i].real() * inv_length;
      residue = std::max(residue, std::abs(phys[i].imag()) * inv_length);
      scale = std::max(scale, std::abs(target[i]));
    }
  }
  last_imag_residue_ = scale > 0.0 ? residue / scale : residue;
  return g;
}

SpectralField FourierWorkspace::to_spectral(const PhysicalField& g) {
  const Lattice& lat = *lattice_;
  const std::size_t sz = std::size_t(lat.grid_size());
  std::vector<Complex> grid(sz), cx(sz), cy(sz);

  const double norm = lat.length() / (double(lat.n()) * double(lat.n()));
  for (std::size_t i = 0; i < sz; ++i) grid[i] = Complex(g.vx[i], 0.0);
  forward(grid, cx);
  for (std::size_t i = 0; i < sz; ++i) grid[i] = Complex(g.vy[i], 0.0);
  forward(grid, cy);
  for (std::size_t i = 0; i < sz; ++i) {
    cx[i] *= norm;
    cy[i] *= norm;
  }

  SpectralField out = leray_project(lat, cx, cy);
  // Real input makes the forward transform Hermitian up to rounding; enforce
  // the symmetry exactly so reality is an invariant, not an approximation.
  for (const Mode& m : lat.canonical_modes()) {
    const Complex avg =
        0.5 * (out.at(m.k1, m.k2) + std::conj(out.at(-m.k1, -m.k2)));
    out.assign_pair(m.k1, m.k2, avg);
  }
  return out;
}

}  // namespace pairflow
