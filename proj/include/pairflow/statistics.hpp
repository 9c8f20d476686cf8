#pragma once

#include <span>
#include <string>
#include <vector>

#include "pairflow/advection.hpp"
#include "pairflow/dynamics.hpp"
#include "pairflow/noise.hpp"

namespace pairflow {

// Running time averages for a fixed panel of named observables, with
// batch-means error bars for correlated samples. Merging two accumulators
// reproduces the moments of the concatenated sample stream exactly; batch
// buffers concatenate (a trailing partial batch enters the moments but not
// the error bar).
//
// Batches grow adaptively: the batch length doubles whenever the buffer
// would exceed twice the target count, so long runs end up with between
// `target_batches` and `2 target_batches` batches of equal length.
class StatsAccumulator {
 public:
  StatsAccumulator() = default;
  explicit StatsAccumulator(std::vector<std::string> names,
                            int target_batches = 30);

  void append(std::span<const double> row);
  void merge(const StatsAccumulator& other);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t index_of(const std::string& name) const;

  long long count() const { return count_; }
  double mean(std::size_t i) const;
  double mean(const std::string& name) const { return mean(index_of(name)); }
  double variance(std::size_t i) const;

  // Means of the complete batches, aligned across channels.
  std::vector<double> batch_means(std::size_t i) const;
  std::size_t complete_batches() const { return batch_count_; }
  long long batch_length() const { return batch_len_; }

  // Standard error of the mean from batch means; throws
  // InsufficientDataError with fewer than two complete batches.
  double batch_stderr(std::size_t i) const;
  double batch_stderr(const std::string& name) const {
    return batch_stderr(index_of(name));
  }

 private:
  void roll_up();

  std::vector<std::string> names_;
  int target_batches_ = 30;
  long long count_ = 0;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  // batch_sums_[c] holds per-channel sums of complete batches.
  std::vector<std::vector<double>> batch_sums_;
  std::size_t batch_count_ = 0;
  long long batch_len_ = 1;
  std::vector<double> open_sum_;
  long long open_fill_ = 0;
};

// Observable panel of one pair trajectory. Rows cover the energy (H),
// enstrophy (V) and D(A) norms of u, w and the pair, the noise-weighted
// quadratic forms <Qx,x> and <QAx,Ax> that enter the exact stationary
// balances, the advection production <B(x,x), Ax>, and the p-dependent
// moment combinations for each requested order.
class PairObserver {
 public:
  PairObserver(const Lattice& lattice, const NoiseModel& model, double lambda,
               bool nonlinear, std::vector<int> p_orders,
               int target_batches = 30);

  void observe(const PairState& state);

  const StatsAccumulator& stats() const { return stats_; }
  StatsAccumulator& stats() { return stats_; }
  const std::vector<int>& p_orders() const { return p_orders_; }

  static std::vector<std::string> observable_names(
      const std::vector<int>& p_orders);

 private:
  const Lattice* lattice_;
  const NoiseModel* model_;
  double lambda_;
  bool nonlinear_;
  std::vector<int> p_orders_;
  AdvectionOperator advection_;
  StatsAccumulator stats_;
  std::vector<double> row_;
};

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;        // exact stationary Ito balance
  double rhs_bound = 0.0;  // coarse (p-1) Tr form, an upper bound for p > 2
  double rel_err = 0.0;
  double residual_stderr = 0.0;
  double tolerance_rel = 0.0;
  bool pass = false;
  bool odd_extrapolation = false;
  long long samples = 0;
};

// Minimum number of complete batches before an identity verdict is issued.
inline constexpr std::size_t kMinIdentityBatches = 8;

// Stationary enstrophy balance: time-avg ||x||_V^2 against Tr Q / nu.
IdentityReport enstrophy_identity_check(const StatsAccumulator& acc,
                                        double trace_q, double nu,
                                        double tol_rel = 0.05);

// Stationary p-th moment balance of |x|_H:
//   nu E[|x|^(p-2) ||x||_V^2] = TrQ E[|x|^(p-2)] + (p-2)/2 E[|x|^(p-4)<Qx,x>].
// For p = 2 this reduces to the enstrophy balance exactly.
IdentityReport p_moment_identity_check(const StatsAccumulator& acc,
                                       double trace_q, double nu, int p,
                                       double tol_rel = 0.10);

// Stationary p-th moment balance of ||x||_V (torus form):
//   nu E[||x||^(p-2) ||x||_{D(A)}^2] + E[||x||^(p-2) <B(x,x),Ax>]
//     = TrAQ E[||x||^(p-2)] + (p-2)/2 E[||x||^(p-4) <QAx,Ax>],
// with the measured advection production moved to the right-hand side.
IdentityReport vorticity_moment_identity_check(const StatsAccumulator& acc,
                                               double trace_aq, double nu,
                                               int p, double tol_rel = 0.10);

struct PanelEntry {
  std::string observable;
  double mean = 0.0;
  double se = 0.0;
};

struct ConvergenceRow {
  std::string observable;
  double lambda = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double dist = 0.0;     // |mean(lambda) - mean(lambda0)|
  double dist_se = 0.0;  // combined standard error of the distance
};

// Per-observable distances of stationary expectations from the lambda0 run;
// panels must list identical observables in identical order.
std::vector<ConvergenceRow> measure_convergence_report(
    const std::vector<std::pair<double, std::vector<PanelEntry>>>& runs,
    double lambda0);

}  // namespace pairflow
