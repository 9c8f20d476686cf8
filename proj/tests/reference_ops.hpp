#pragma once

// Independent reference implementations used as oracles by the tests:
// a dense direct convolution for the advection operator and helper field
// constructors. Deliberately naive; shares no code path with the
// pseudo-spectral pipeline it checks.

#include <complex>

#include "pairflow/spectral_field.hpp"

namespace pairflow::reference {

// B(u, v) = P[(u . grad) v] by direct summation over mode pairs:
//   hat[(u.grad)v]_c(m) = sum_{k+j=m} (uhat(k) . i 2 pi j / L) vhat_c(j),
// then projection onto the polarization of m. Inputs must be dealiased so
// the grid product the operator under test computes is alias-free in band.
inline SpectralField direct_advection(const SpectralField& u,
                                      const SpectralField& v) {
  const Lattice& lat = u.lattice();
  const double wave = kTwoPi / lat.length();
  const double inv_length = 1.0 / lat.length();
  SpectralField out(lat);
  for (const Mode& m : lat.modes()) {
    if (!lat.in_dealias_band(m.k1, m.k2)) continue;
    Complex wx{}, wy{};
    for (const Mode& k : lat.modes()) {
      if (!lat.in_dealias_band(k.k1, k.k2)) continue;
      const Mode j{m.k1 - k.k1, m.k2 - k.k2};
      if (!lat.active(j.k1, j.k2) || !lat.in_dealias_band(j.k1, j.k2))
        continue;
      double ek1, ek2, ej1, ej2;
      lat.polarization(k.k1, k.k2, ek1, ek2);
      lat.polarization(j.k1, j.k2, ej1, ej2);
      const Complex uk = u.at(k);
      const Complex vj = v.at(j);
      // (u_k . i j) with the 2 pi / L wavevector scale
      const Complex advect =
          uk * Complex(0.0, wave) * (ek1 * double(j.k1) + ek2 * double(j.k2));
      wx += advect * vj * ej1;
      wy += advect * vj * ej2;
    }
    // physical-space product of two 1/L-normalized series carries 1/L^2;
    // the projected coefficient is again 1/L-normalized
    double e1, e2;
    lat.polarization(m.k1, m.k2, e1, e2);
    out.at(m.k1, m.k2) = (wx * e1 + wy * e2) * inv_length;
  }
  return out;
}

inline SpectralField single_mode(const Lattice& lat, int k1, int k2,
                                 Complex a) {
  SpectralField f(lat);
  f.assign_pair(k1, k2, a);
  return f;
}

}  // namespace pairflow::reference
