#include "pairflow/spectral_field.hpp"

#include <cmath>

#include "pairflow/errors.hpp"

namespace pairflow {

namespace {

void require_same_lattice(const SpectralField& a, const SpectralField& b) {
  if (!(a.lattice() == b.lattice()))
    throw NumericsError("spectral fields live on different lattices");
}

}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& rhs) {
  require_same_lattice(*this, rhs);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& rhs) {
  require_same_lattice(*this, rhs);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (Complex& c : a_) c *= s;
  return *this;
}

double sobolev_norm_sq(const SpectralField& f, double alpha) {
  const Lattice& lat = f.lattice();
  double sum = 0.0;
  if (alpha == 0.0) {
    for (const Mode& m : lat.modes()) sum += std::norm(f.at(m));
    return sum;
  }
  for (const Mode& m : lat.modes())
    sum += std::pow(lat.gamma(m), 2.0 * alpha) * std::norm(f.at(m));
  return sum;
}

double h_inner(const SpectralField& f, const SpectralField& g) {
  require_same_lattice(f, g);
  double sum = 0.0;
  for (const Mode& m : f.lattice().modes())
    sum += std::real(std::conj(f.at(m)) * g.at(m));
  return sum;
}

double h_norm(const SpectralField& f) {
  return std::sqrt(sobolev_norm_sq(f, 0.0));
}

double h_distance(const SpectralField& f, const SpectralField& g) {
  require_same_lattice(f, g);
  double sum = 0.0;
  for (const Mode& m : f.lattice().modes()) sum += std::norm(f.at(m) - g.at(m));
  return std::sqrt(sum);
}

double max_coefficient(const SpectralField& f) {
  double worst = 0.0;
  for (const Complex& c : f.raw()) {
    const double v = std::abs(c);
    if (std::isnan(v)) return v;
    if (v > worst) worst = v;
  }
  return worst;
}

SpectralField leray_project(const Lattice& lattice, std::span<const Complex> cx,
                            std::span<const Complex> cy) {
  if (cx.size() != std::size_t(lattice.grid_size()) || cy.size() != cx.size())
    throw NumericsError("leray_project: coefficient array size mismatch");
  SpectralField out(lattice);
  for (const Mode& m : lattice.modes()) {
    double e1, e2;
    lattice.polarization(m.k1, m.k2, e1, e2);
    const int idx = lattice.grid_index(m.k1, m.k2);
    out.at(m.k1, m.k2) = cx[idx] * e1 + cy[idx] * e2;
  }
  return out;
}

SpectralField stokes_semigroup(const SpectralField& f, double t, double nu) {
  SpectralField out = f;
  stokes_semigroup_inplace(out, t, nu);
  return out;
}

void stokes_semigroup_inplace(SpectralField& f, double t, double nu) {
  if (t < 0.0) throw NumericsError("stokes_semigroup: negative time");
  if (!(nu > 0.0)) throw NumericsError("stokes_semigroup: viscosity must be positive");
  if (t == 0.0) return;
  const Lattice& lat = f.lattice();
  for (const Mode& m : lat.modes())
    f.at(m.k1, m.k2) *= std::exp(-nu * lat.gamma(m) * t);
}

SpectralField apply_stokes_power(const SpectralField& f, double power) {
  const Lattice& lat = f.lattice();
  SpectralField out(lat);
  for (const Mode& m : lat.modes())
    out.at(m.k1, m.k2) = std::pow(lat.gamma(m), power) * f.at(m);
  return out;
}

void dealias_inplace(SpectralField& f) {
  const Lattice& lat = f.lattice();
  for (const Mode& m : lat.modes())
    if (!lat.in_dealias_band(m.k1, m.k2)) f.at(m.k1, m.k2) = Complex{};
}

bool dealias_clean(const SpectralField& f) {
  const Lattice& lat = f.lattice();
  for (const Mode& m : lat.modes())
    if (!lat.in_dealias_band(m.k1, m.k2) && f.at(m) != Complex{}) return false;
  return true;
}

}  // namespace pairflow
