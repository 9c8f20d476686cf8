#include "pairflow/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pairflow/errors.hpp"
#include "pairflow/rng.hpp"

namespace pairflow {

namespace {

double int_power(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

StructureFunctionTable::StructureFunctionTable(const Lattice& lattice,
                                               std::vector<int> orders)
    : lattice_(&lattice), orders_(std::move(orders)), max_m_(lattice.n() / 2) {
  for (int p : orders_)
    if (p < 1) throw ConfigError("structure-function orders must be >= 1");
  if (orders_.empty() || orders_.size() > 8)
    throw ConfigError("structure-function order list must hold 1 to 8 entries");
  signed_sum_.assign(orders_.size(), std::vector<double>(max_m_, 0.0));
  abs_sum_.assign(orders_.size(), std::vector<double>(max_m_, 0.0));
  count_.assign(max_m_, 0);
}

std::size_t StructureFunctionTable::order_index(int p) const {
  for (std::size_t i = 0; i < orders_.size(); ++i)
    if (orders_[i] == p) return i;
  throw ConfigError("structure table does not hold order p=" +
                    std::to_string(p));
}

double StructureFunctionTable::separation(int m) const {
  return double(m) * lattice_->length() / lattice_->n();
}

void StructureFunctionTable::accumulate(const PhysicalField& field) {
  if (!(*field.lattice == *lattice_))
    throw ConfigError("structure table: snapshot lattice mismatch");
  const int n = lattice_->n();
  for (int m = 1; m <= max_m_; ++m) {
    const std::size_t oi_end = orders_.size();
    double* srow[8];
    double* arow[8];
    for (std::size_t oi = 0; oi < oi_end; ++oi) {
      srow[oi] = &signed_sum_[oi][m - 1];
      arow[oi] = &abs_sum_[oi][m - 1];
    }
    for (int i = 0; i < n; ++i) {
      const int ip = (i + m) % n;
      for (int j = 0; j < n; ++j) {
        // longitudinal increments: x-component along x, y-component along y
        const double dx = field.vx[std::size_t(ip) * n + j] -
                          field.vx[std::size_t(i) * n + j];
        const int jp = (j + m) % n;
        const double dy = field.vy[std::size_t(i) * n + jp] -
                          field.vy[std::size_t(i) * n + j];
        for (std::size_t oi = 0; oi < oi_end; ++oi) {
          const int p = orders_[oi];
          const double sx = int_power(dx, p);
          const double sy = int_power(dy, p);
          *srow[oi] += sx + sy;
          *arow[oi] += std::abs(sx) + std::abs(sy);
        }
      }
    }
    count_[m - 1] += 2ll * n * n;
  }
  ++snapshots_;
}

void StructureFunctionTable::merge(const StructureFunctionTable& other) {
  if (!(*other.lattice_ == *lattice_) || other.orders_ != orders_)
    throw ConfigError("structure table merge: incompatible tables");
  for (std::size_t oi = 0; oi < orders_.size(); ++oi)
    for (int m = 0; m < max_m_; ++m) {
      signed_sum_[oi][m] += other.signed_sum_[oi][m];
      abs_sum_[oi][m] += other.abs_sum_[oi][m];
    }
  for (int m = 0; m < max_m_; ++m) count_[m] += other.count_[m];
  snapshots_ += other.snapshots_;
}

double StructureFunctionTable::signed_moment(int p, int m) const {
  if (m == 0) return 0.0;  // zero separation has zero increment
  const long long c = count_[m - 1];
  return c > 0 ? signed_sum_[order_index(p)][m - 1] / double(c) : 0.0;
}

double StructureFunctionTable::abs_moment(int p, int m) const {
  if (m == 0) return 0.0;
  const long long c = count_[m - 1];
  return c > 0 ? abs_sum_[order_index(p)][m - 1] / double(c) : 0.0;
}

long long StructureFunctionTable::count(int m) const {
  return m == 0 ? 0 : count_[m - 1];
}

ScalingFit fit_scaling_points(std::span<const double> l,
                              std::span<const double> s, int p, double l_min,
                              double l_max, std::uint64_t bootstrap_seed,
                              int bootstrap_rounds) {
  std::vector<double> lx, ly;
  std::string usable;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (s[i] > 0.0) {
      if (!usable.empty()) usable += ", ";
      usable += std::to_string(l[i]);
    }
    if (l[i] < l_min || l[i] > l_max || s[i] <= 0.0) continue;
    lx.push_back(std::log(l[i]));
    ly.push_back(std::log(s[i]));
  }
  const int npts = int(lx.size());
  if (npts < 4)
    throw InsufficientDataError(
        "scaling fit for p=" + std::to_string(p) + " has only " +
        std::to_string(npts) +
        " usable separations in range; positive entries exist at l = {" +
        usable + "}");

  auto slope_of = [&](const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < npts; ++i) {
      mx += lx[i];
      my += y[i];
    }
    mx /= npts;
    my /= npts;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < npts; ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return std::pair<double, double>(slope, my - slope * mx);
  };

  ScalingFit fit;
  fit.p = p;
  fit.points = npts;
  auto [slope, intercept] = slope_of(ly);
  fit.zeta = slope;
  fit.intercept = intercept;

  double ss_res = 0.0, ss_tot = 0.0, my = 0.0;
  for (int i = 0; i < npts; ++i) my += ly[i];
  my /= npts;
  std::vector<double> fitted(npts), resid(npts);
  for (int i = 0; i < npts; ++i) {
    fitted[i] = intercept + slope * lx[i];
    resid[i] = ly[i] - fitted[i];
    ss_res += resid[i] * resid[i];
    ss_tot += (ly[i] - my) * (ly[i] - my);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  // Residual bootstrap for the slope error.
  double bm = 0.0, bs = 0.0;
  std::vector<double> ystar(npts);
  std::vector<double> slopes(bootstrap_rounds);
  for (int b = 0; b < bootstrap_rounds; ++b) {
    for (int i = 0; i < npts; ++i) {
      const philox::Counter out = philox::block(
          {std::uint32_t(i), std::uint32_t(b), 0u, 0x5f17u},
          {std::uint32_t(bootstrap_seed), std::uint32_t(bootstrap_seed >> 32)});
      const std::size_t pick = out[0] % std::size_t(npts);
      ystar[i] = fitted[i] + resid[pick];
    }
    slopes[b] = slope_of(ystar).first;
  }
  for (double v : slopes) bm += v;
  bm /= bootstrap_rounds;
  for (double v : slopes) bs += (v - bm) * (v - bm);
  fit.se = std::sqrt(bs / std::max(1, bootstrap_rounds - 1));
  return fit;
}

ScalingFit fit_scaling(const StructureFunctionTable& table, int p,
                       double l_min, double l_max,
                       std::uint64_t bootstrap_seed, int bootstrap_rounds) {
  std::vector<double> l, s;
  for (int m = 1; m <= table.separations(); ++m) {
    l.push_back(table.separation(m));
    s.push_back(table.abs_moment(p, m));
  }
  return fit_scaling_points(l, s, p, l_min, l_max, bootstrap_seed,
                            bootstrap_rounds);
}

RescalingCheck rescaling_check(const StructureFunctionTable& table,
                               const std::vector<PhysicalField>& snapshots,
                               double lambda, double tol) {
  if (snapshots.empty())
    throw InsufficientDataError("rescaling check needs snapshots");
  StructureFunctionTable scaled(*snapshots.front().lattice, table.orders());
  for (const PhysicalField& f : snapshots) {
    PhysicalField g = f;
    for (double& v : g.vx) v *= lambda;
    for (double& v : g.vy) v *= lambda;
    scaled.accumulate(g);
  }
  RescalingCheck check;
  check.pass = true;
  for (int p : table.orders()) {
    const double lp = int_power(lambda, p);
    const double lp_abs = std::abs(lp);
    for (int m = 1; m <= table.separations(); ++m) {
      const double scale = lp_abs * table.abs_moment(p, m);
      if (scale == 0.0) continue;
      const double err_signed =
          std::abs(scaled.signed_moment(p, m) - lp * table.signed_moment(p, m));
      const double err_abs =
          std::abs(scaled.abs_moment(p, m) - lp_abs * table.abs_moment(p, m));
      check.max_rel_err =
          std::max(check.max_rel_err, std::max(err_signed, err_abs) / scale);
    }
  }
  check.pass = check.max_rel_err <= tol;
  return check;
}

double structure_moment(const PhysicalField& field, int p, int m,
                        bool absolute) {
  const int n = field.lattice->n();
  if (m < 1 || m > n / 2)
    throw ConfigError("structure_moment: separation index out of range");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int ip = (i + m) % n;
    for (int j = 0; j < n; ++j) {
      const double dx =
          field.vx[std::size_t(ip) * n + j] - field.vx[std::size_t(i) * n + j];
      const int jp = (j + m) % n;
      const double dy =
          field.vy[std::size_t(i) * n + jp] - field.vy[std::size_t(i) * n + j];
      const double sx = int_power(dx, p);
      const double sy = int_power(dy, p);
      sum += absolute ? std::abs(sx) + std::abs(sy) : sx + sy;
    }
  }
  return sum / double(2ll * n * n);
}

SpectralField gaussian_random_field(
    const Lattice& lattice, const std::function<double(double)>& variance,
    std::uint64_t seed, std::uint32_t index, bool band_limited) {
  SpectralField f(lattice);
  const auto& canon = lattice.canonical_modes();
  for (std::size_t j = 0; j < canon.size(); ++j) {
    const Mode m = canon[j];
    if (band_limited && !lattice.in_dealias_band(m.k1, m.k2)) continue;
    const double v = variance(lattice.gamma(m));
    if (v <= 0.0) continue;
    const NormalPair z = counter_normals(seed, 0x6f5au ^ index, j, 0u);
    f.assign_pair(m.k1, m.k2,
                  std::sqrt(0.5 * v) * Complex(z.z0, z.z1));
  }
  return f;
}

}  // namespace pairflow
