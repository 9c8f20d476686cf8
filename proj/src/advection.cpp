#include "pairflow/advection.hpp"

#include <cmath>

#include "pairflow/errors.hpp"

namespace pairflow {

AdvectionOperator::AdvectionOperator(const Lattice& lattice)
    : lattice_(&lattice),
      ws_(lattice),
      sx_(std::size_t(lattice.grid_size())),
      sy_(std::size_t(lattice.grid_size())),
      grid_a_(std::size_t(lattice.grid_size())),
      grid_b_(std::size_t(lattice.grid_size())),
      gx_(std::size_t(lattice.grid_size())),
      gy_(std::size_t(lattice.grid_size())),
      prod_(std::size_t(lattice.grid_size())) {
  for (const Mode& m : lattice.canonical_modes())
    if (lattice.in_dealias_band(m.k1, m.k2))
      band_pairs_.push_back({lattice.grid_index(m.k1, m.k2),
                             lattice.grid_index(-m.k1, -m.k2)});
}

void AdvectionOperator::set_advecting(const SpectralField& s) {
  if (!(s.lattice() == *lattice_))
    throw NumericsError("advection: advecting field lattice mismatch");
  const PhysicalField phys = ws_.to_physical(s);
  sx_ = phys.vx;
  sy_ = phys.vy;
  max_speed_ = 0.0;
  for (std::size_t i = 0; i < sx_.size(); ++i)
    max_speed_ = std::max({max_speed_, std::abs(sx_[i]), std::abs(sy_[i])});
  loaded_ = true;
}

SpectralField AdvectionOperator::advect(const SpectralField& v) {
  if (!loaded_) throw NumericsError("advection: no advecting field loaded");
  if (!(v.lattice() == *lattice_))
    throw NumericsError("advection: advected field lattice mismatch");

  const Lattice& lat = *lattice_;
  const std::size_t sz = std::size_t(lat.grid_size());
  const double inv_length = 1.0 / lat.length();
  const double fwd_norm = lat.length() / (double(lat.n()) * double(lat.n()));
  const std::vector<double>& wx = lat.wave_x();
  const std::vector<double>& wy = lat.wave_y();

  // grid_a_/grid_b_ hold hat v_c(k); reused as the product coefficient grids.
  ws_.component_grids(v, grid_a_, grid_b_);

  for (int comp = 0; comp < 2; ++comp) {
    std::span<Complex> vc = comp == 0 ? std::span<Complex>(grid_a_)
                                      : std::span<Complex>(grid_b_);
    // d v_c / dx and d v_c / dy in collocation space
    for (std::size_t i = 0; i < sz; ++i) {
      const Complex a = vc[i];
      gx_[i] = Complex(0.0, wx[i]) * a;
      gy_[i] = Complex(0.0, wy[i]) * a;
    }
    ws_.backward(gx_, gx_);
    ws_.backward(gy_, gy_);
    for (std::size_t i = 0; i < sz; ++i) {
      const double dx = gx_[i].real() * inv_length;
      const double dy = gy_[i].real() * inv_length;
      prod_[i] = Complex(sx_[i] * dx + sy_[i] * dy, 0.0);
    }
    ws_.forward(prod_, vc);
    for (std::size_t i = 0; i < sz; ++i) vc[i] *= fwd_norm;
  }

  // Project onto the divergence-free polarization inside the dealias band
  // (2/3-rule truncation) and symmetrize the conjugate pairs exactly.
  SpectralField out(lat);
  const std::vector<double>& e1 = lat.pol_x();
  const std::vector<double>& e2 = lat.pol_y();
  std::span<Complex> o = out.raw();
  for (const auto& [ip, im] : band_pairs_) {
    const Complex plus = grid_a_[ip] * e1[ip] + grid_b_[ip] * e2[ip];
    const Complex minus = grid_a_[im] * e1[ip] + grid_b_[im] * e2[ip];
    const Complex value = 0.5 * (plus + std::conj(minus));
    o[ip] = value;
    o[im] = std::conj(value);
  }
  return out;
}

SpectralField AdvectionOperator::apply(const SpectralField& u,
                                       const SpectralField& v) {
  set_advecting(u);
  return advect(v);
}

}  // namespace pairflow
