#pragma once

#include <functional>
#include <vector>

#include "pairflow/spectral_field.hpp"

namespace pairflow {

// Longitudinal structure functions S^p(l): moments of the velocity
// increment [v(x + l e) - v(x)] . e accumulated over every grid point,
// both axis directions, and all fed snapshots. Separations are the grid
// multiples l = m L/N, m = 1 .. N/2. Signed and absolute moments are kept;
// for even p the two coincide bitwise.
class StructureFunctionTable {
 public:
  StructureFunctionTable(const Lattice& lattice, std::vector<int> orders);

  void accumulate(const PhysicalField& field);
  void merge(const StructureFunctionTable& other);

  const std::vector<int>& orders() const { return orders_; }
  int separations() const { return max_m_; }
  double separation(int m) const;  // l = m h, m in [1, separations()]

  double signed_moment(int p, int m) const;
  double abs_moment(int p, int m) const;
  long long count(int m) const;
  long long snapshots() const { return snapshots_; }

 private:
  std::size_t order_index(int p) const;
  const Lattice* lattice_;
  std::vector<int> orders_;
  int max_m_;
  std::vector<std::vector<double>> signed_sum_;  // [order][m-1]
  std::vector<std::vector<double>> abs_sum_;
  std::vector<long long> count_;
  long long snapshots_ = 0;
};

struct ScalingFit {
  int p = 0;
  double zeta = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double se = 0.0;  // residual-bootstrap standard error of the slope
  int points = 0;
};

// Least-squares slope of log S versus log l over separations within
// [l_min, l_max] with positive values. Throws InsufficientDataError
// (listing the usable separations) with fewer than four points.
ScalingFit fit_scaling_points(std::span<const double> l,
                              std::span<const double> s, int p, double l_min,
                              double l_max,
                              std::uint64_t bootstrap_seed = 2024,
                              int bootstrap_rounds = 200);

// Same on the absolute moments of a table.
ScalingFit fit_scaling(const StructureFunctionTable& table, int p,
                       double l_min, double l_max,
                       std::uint64_t bootstrap_seed = 2024,
                       int bootstrap_rounds = 200);

struct RescalingCheck {
  bool pass = false;
  double max_rel_err = 0.0;
};

// Homogeneity of the estimator: the table rebuilt from lambda-scaled
// snapshots must equal lambda^p times the original entry-wise, relative to
// the absolute-moment scale.
RescalingCheck rescaling_check(const StructureFunctionTable& table,
                               const std::vector<PhysicalField>& snapshots,
                               double lambda, double tol = 1e-12);

// Single-entry estimate: mean of the (signed or absolute) p-th power of the
// longitudinal increment at separation index m over one snapshot.
double structure_moment(const PhysicalField& field, int p, int m,
                        bool absolute);

// Divergence-free Gaussian random field with per-mode variance
// E|a_k|^2 = variance(gamma(k)); one independent draw per (seed, index).
// Drives the synthetic-spectrum estimator oracle and spectral initial data.
SpectralField gaussian_random_field(
    const Lattice& lattice, const std::function<double(double)>& variance,
    std::uint64_t seed, std::uint32_t index, bool band_limited = true);

}  // namespace pairflow
