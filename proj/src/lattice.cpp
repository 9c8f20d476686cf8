#include "pairflow/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "pairflow/errors.hpp"

namespace pairflow {

Lattice::Lattice(int resolution, double domain_size)
    : n_(resolution), length_(domain_size), kmax_(resolution / 3) {
  if (n_ < 4 || n_ % 2 != 0)
    throw ConfigError("lattice resolution must be an even integer >= 4, got " +
                      std::to_string(n_));
  if (!(length_ > 0.0))
    throw ConfigError("lattice domain size must be positive");

  const int h = half();
  modes_.reserve(std::size_t((2 * h + 1) * (2 * h + 1) - 1));
  for (int k1 = -h; k1 <= h; ++k1)
    for (int k2 = -h; k2 <= h; ++k2)
      if (k1 != 0 || k2 != 0) modes_.push_back({k1, k2});

  canonical_.reserve(modes_.size() / 2);
  for (const Mode& m : modes_)
    if (canonical(m.k1, m.k2)) canonical_.push_back(m);
  std::sort(canonical_.begin(), canonical_.end(),
            [this](const Mode& a, const Mode& b) {
              const int ga = a.k1 * a.k1 + a.k2 * a.k2;
              const int gb = b.k1 * b.k1 + b.k2 * b.k2;
              if (ga != gb) return ga < gb;
              if (a.k1 != b.k1) return a.k1 < b.k1;
              return a.k2 < b.k2;
            });

  const std::size_t grid = std::size_t(grid_size());
  wave_x_.assign(grid, 0.0);
  wave_y_.assign(grid, 0.0);
  pol_x_.assign(grid, 0.0);
  pol_y_.assign(grid, 0.0);
  gamma_grid_.assign(grid, 0.0);
  active_grid_.assign(grid, 0);
  band_grid_.assign(grid, 0);
  const double wave = kTwoPi / length_;
  for (const Mode& m : modes_) {
    const std::size_t idx = std::size_t(grid_index(m.k1, m.k2));
    wave_x_[idx] = wave * m.k1;
    wave_y_[idx] = wave * m.k2;
    polarization(m.k1, m.k2, pol_x_[idx], pol_y_[idx]);
    gamma_grid_[idx] = gamma(m);
    active_grid_[idx] = 1;
    band_grid_[idx] = in_dealias_band(m.k1, m.k2) ? 1 : 0;
  }
}

void Lattice::polarization(int k1, int k2, double& e1, double& e2) const {
  const double norm = std::sqrt(double(k1 * k1 + k2 * k2));
  const double s = canonical(k1, k2) ? 1.0 : -1.0;
  e1 = -s * double(k2) / norm;
  e2 = s * double(k1) / norm;
}

}  // namespace pairflow
