#include "pairflow/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "pairflow/errors.hpp"

namespace pairflow {

StatsAccumulator::StatsAccumulator(std::vector<std::string> names,
                                   int target_batches)
    : names_(std::move(names)),
      target_batches_(std::max(2, target_batches)),
      sum_(names_.size(), 0.0),
      sum_sq_(names_.size(), 0.0),
      batch_sums_(names_.size()),
      open_sum_(names_.size(), 0.0) {}

std::size_t StatsAccumulator::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw ConfigError("unknown observable '" + name + "'");
}

void StatsAccumulator::append(std::span<const double> row) {
  if (row.size() != names_.size())
    throw ConfigError("observation row width does not match the panel");
  ++count_;
  for (std::size_t i = 0; i < row.size(); ++i) {
    sum_[i] += row[i];
    sum_sq_[i] += row[i] * row[i];
    open_sum_[i] += row[i];
  }
  if (++open_fill_ == batch_len_) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      batch_sums_[i].push_back(open_sum_[i]);
      open_sum_[i] = 0.0;
    }
    open_fill_ = 0;
    ++batch_count_;
    if (batch_count_ >= std::size_t(2 * target_batches_)) roll_up();
  }
}

void StatsAccumulator::roll_up() {
  // Halve the batch count by summing adjacent pairs; an odd trailing batch
  // is folded back into the open batch.
  const std::size_t pairs = batch_count_ / 2;
  const bool odd = batch_count_ % 2 != 0;
  for (std::size_t c = 0; c < names_.size(); ++c) {
    auto& b = batch_sums_[c];
    if (odd) open_sum_[c] += b.back();
    for (std::size_t i = 0; i < pairs; ++i) b[i] = b[2 * i] + b[2 * i + 1];
    b.resize(pairs);
  }
  if (odd) open_fill_ += batch_len_;
  batch_count_ = pairs;
  batch_len_ *= 2;
  // The folded tail may itself fill the doubled batch.
  if (open_fill_ >= batch_len_) {
    for (std::size_t c = 0; c < names_.size(); ++c) {
      batch_sums_[c].push_back(open_sum_[c]);
      open_sum_[c] = 0.0;
    }
    open_fill_ = 0;
    ++batch_count_;
  }
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  if (other.names_ != names_)
    throw ConfigError("cannot merge accumulators with different panels");
  count_ += other.count_;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    sum_[i] += other.sum_[i];
    sum_sq_[i] += other.sum_sq_[i];
  }
  // Bring both sides to a common batch length, then concatenate. The other
  // side's open batch contributes to the moments only.
  StatsAccumulator rhs = other;
  while (batch_len_ < rhs.batch_len_) roll_up();
  while (rhs.batch_len_ < batch_len_) rhs.roll_up();
  for (std::size_t c = 0; c < names_.size(); ++c)
    batch_sums_[c].insert(batch_sums_[c].end(), rhs.batch_sums_[c].begin(),
                          rhs.batch_sums_[c].end());
  batch_count_ += rhs.batch_count_;
  while (batch_count_ >= std::size_t(2 * target_batches_)) roll_up();
}

double StatsAccumulator::mean(std::size_t i) const {
  if (count_ == 0) throw InsufficientDataError("empty accumulator");
  return sum_[i] / double(count_);
}

double StatsAccumulator::variance(std::size_t i) const {
  if (count_ < 2) throw InsufficientDataError("variance needs two samples");
  const double m = sum_[i] / double(count_);
  const double v =
      (sum_sq_[i] - double(count_) * m * m) / double(count_ - 1);
  return std::max(0.0, v);
}

std::vector<double> StatsAccumulator::batch_means(std::size_t i) const {
  std::vector<double> means(batch_sums_[i].size());
  for (std::size_t b = 0; b < means.size(); ++b)
    means[b] = batch_sums_[i][b] / double(batch_len_);
  return means;
}

double StatsAccumulator::batch_stderr(std::size_t i) const {
  if (batch_count_ < 2)
    throw InsufficientDataError(
        "batch-means error bar needs at least two complete batches");
  const std::vector<double> means = batch_means(i);
  double m = 0.0;
  for (double v : means) m += v;
  m /= double(means.size());
  double ss = 0.0;
  for (double v : means) ss += (v - m) * (v - m);
  return std::sqrt(ss / double(means.size() - 1) / double(means.size()));
}

std::vector<std::string> PairObserver::observable_names(
    const std::vector<int>& p_orders) {
  std::vector<std::string> names = {"h2_u", "h2_w", "h2_x", "v2_u", "v2_w",
                                    "v2_x", "a2_u", "a2_w", "a2_x", "d14_x",
                                    "qx",   "qax",  "bax"};
  for (int p : p_orders) {
    const std::string t = std::to_string(p);
    for (const char* base : {"hp", "hv", "hq", "vp", "va", "vq", "vb"})
      names.push_back(base + t);
  }
  return names;
}

PairObserver::PairObserver(const Lattice& lattice, const NoiseModel& model,
                           double lambda, bool nonlinear,
                           std::vector<int> p_orders, int target_batches)
    : lattice_(&lattice),
      model_(&model),
      lambda_(lambda),
      nonlinear_(nonlinear),
      p_orders_(std::move(p_orders)),
      advection_(lattice),
      stats_(observable_names(p_orders_), target_batches) {
  for (int p : p_orders_)
    if (p < 2) throw ConfigError("statistics.p_orders entries must be >= 2");
  row_.resize(stats_.names().size());
}

void PairObserver::observe(const PairState& state) {
  const Lattice& lat = *lattice_;
  const SpectralField& u = state.u;
  const SpectralField& w = state.w;

  const double h2u = sobolev_norm_sq(u, 0.0);
  const double h2w = sobolev_norm_sq(w, 0.0);
  const double v2u = sobolev_norm_sq(u, 0.5);
  const double v2w = sobolev_norm_sq(w, 0.5);
  const double a2u = sobolev_norm_sq(u, 1.0);
  const double a2w = sobolev_norm_sq(w, 1.0);
  const double d14 = sobolev_norm_sq(u, 0.25) + sobolev_norm_sq(w, 0.25);
  const double h2x = h2u + h2w;
  const double v2x = v2u + v2w;
  const double a2x = a2u + a2w;

  // <Qx,x> and <QAx,Ax>: Q is diagonal per mode, conjugate pairs double.
  double qx = 0.0, qax = 0.0;
  const auto& canon = lat.canonical_modes();
  for (std::size_t j = 0; j < canon.size(); ++j) {
    const double qj = model_->q(j);
    if (qj == 0.0) continue;
    const double e2 = std::norm(u.at(canon[j])) + std::norm(w.at(canon[j]));
    const double g = lat.gamma(canon[j]);
    qx += 2.0 * qj * e2;
    qax += 2.0 * qj * g * g * e2;
  }

  // Advection production <B(x,x), Ax> of the coupled drift; zero when the
  // nonlinearity is disabled.
  double bax = 0.0;
  if (nonlinear_) {
    if (lambda_ == 0.0) {
      advection_.set_advecting(u);
    } else {
      SpectralField s = u;
      for (const Mode& m : lat.modes()) s.at(m.k1, m.k2) += lambda_ * w.at(m);
      advection_.set_advecting(s);
    }
    const SpectralField bu = advection_.advect(u);
    const SpectralField bw = advection_.advect(w);
    for (const Mode& m : lat.modes())
      bax += lat.gamma(m) * (std::real(std::conj(bu.at(m)) * u.at(m)) +
                             std::real(std::conj(bw.at(m)) * w.at(m)));
  }

  std::size_t i = 0;
  row_[i++] = h2u;
  row_[i++] = h2w;
  row_[i++] = h2x;
  row_[i++] = v2u;
  row_[i++] = v2w;
  row_[i++] = v2x;
  row_[i++] = a2u;
  row_[i++] = a2w;
  row_[i++] = a2x;
  row_[i++] = d14;
  row_[i++] = qx;
  row_[i++] = qax;
  row_[i++] = bax;

  for (int p : p_orders_) {
    const double hp = p == 2 ? 1.0 : std::pow(h2x, 0.5 * double(p - 2));
    const double vp = p == 2 ? 1.0 : std::pow(v2x, 0.5 * double(p - 2));
    const double hq =
        p < 4 ? 0.0 : (p == 4 ? qx : std::pow(h2x, 0.5 * double(p - 4)) * qx);
    const double vq =
        p < 4 ? 0.0 : (p == 4 ? qax : std::pow(v2x, 0.5 * double(p - 4)) * qax);
    row_[i++] = hp;
    row_[i++] = hp * v2x;
    row_[i++] = hq;
    row_[i++] = vp;
    row_[i++] = vp * a2x;
    row_[i++] = vq;
    row_[i++] = vp * bax;
  }
  stats_.append(row_);
}

namespace {

struct Channel {
  std::vector<double> batches;
  double mean;
};

Channel channel(const StatsAccumulator& acc, const std::string& name) {
  const std::size_t i = acc.index_of(name);
  return {acc.batch_means(i), acc.mean(i)};
}

IdentityReport finish(std::string name, double lhs, double rhs,
                      double rhs_bound, std::vector<double> residual_batches,
                      double tol_rel, long long samples) {
  IdentityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.rhs_bound = rhs_bound;
  r.tolerance_rel = tol_rel;
  r.samples = samples;
  if (residual_batches.size() < kMinIdentityBatches)
    throw InsufficientDataError(
        "identity check needs at least " +
        std::to_string(kMinIdentityBatches) + " complete batches, have " +
        std::to_string(residual_batches.size()));
  double m = 0.0;
  for (double v : residual_batches) m += v;
  m /= double(residual_batches.size());
  double ss = 0.0;
  for (double v : residual_batches) ss += (v - m) * (v - m);
  r.residual_stderr = std::sqrt(ss / double(residual_batches.size() - 1) /
                                double(residual_batches.size()));
  const double scale = std::abs(rhs);
  r.rel_err = scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
  r.pass = std::abs(lhs - rhs) <=
           std::max(tol_rel * scale, 3.0 * r.residual_stderr);
  return r;
}

}  // namespace

IdentityReport enstrophy_identity_check(const StatsAccumulator& acc,
                                        double trace_q, double nu,
                                        double tol_rel) {
  if (acc.count() == 0) throw InsufficientDataError("empty accumulator");
  const Channel v2 = channel(acc, "v2_x");
  const double rhs = trace_q / nu;
  std::vector<double> residual = v2.batches;
  for (double& v : residual) v -= rhs;
  return finish("enstrophy", v2.mean, rhs, rhs, std::move(residual), tol_rel,
                acc.count());
}

IdentityReport p_moment_identity_check(const StatsAccumulator& acc,
                                       double trace_q, double nu, int p,
                                       double tol_rel) {
  if (acc.count() == 0) throw InsufficientDataError("empty accumulator");
  if (p < 2) throw ConfigError("p-moment identity needs p >= 2");
  const std::string t = std::to_string(p);
  const Channel hv = channel(acc, "hv" + t);
  const Channel hp = channel(acc, "hp" + t);
  const Channel hq = channel(acc, "hq" + t);
  const double corr = 0.5 * double(p - 2);
  const double rhs = (trace_q * hp.mean + corr * hq.mean) / nu;
  const double rhs_bound = double(p - 1) * trace_q * hp.mean / nu;
  std::vector<double> residual(hv.batches.size());
  for (std::size_t b = 0; b < residual.size(); ++b)
    residual[b] =
        hv.batches[b] - (trace_q * hp.batches[b] + corr * hq.batches[b]) / nu;
  IdentityReport r = finish("h-moment p=" + t, hv.mean, rhs, rhs_bound,
                            std::move(residual), tol_rel, acc.count());
  r.odd_extrapolation = p % 2 != 0;
  return r;
}

IdentityReport vorticity_moment_identity_check(const StatsAccumulator& acc,
                                               double trace_aq, double nu,
                                               int p, double tol_rel) {
  if (acc.count() == 0) throw InsufficientDataError("empty accumulator");
  if (p < 2) throw ConfigError("vorticity moment identity needs p >= 2");
  const std::string t = std::to_string(p);
  const Channel va = channel(acc, "va" + t);
  const Channel vp = channel(acc, "vp" + t);
  const Channel vq = channel(acc, "vq" + t);
  const Channel vb = channel(acc, "vb" + t);
  const double corr = 0.5 * double(p - 2);
  const double rhs =
      (trace_aq * vp.mean + corr * vq.mean - vb.mean) / nu;
  const double rhs_bound = double(p - 1) * trace_aq * vp.mean / nu;
  std::vector<double> residual(va.batches.size());
  for (std::size_t b = 0; b < residual.size(); ++b)
    residual[b] = va.batches[b] - (trace_aq * vp.batches[b] +
                                   corr * vq.batches[b] - vb.batches[b]) /
                                      nu;
  IdentityReport r = finish("v-moment p=" + t, va.mean, rhs, rhs_bound,
                            std::move(residual), tol_rel, acc.count());
  r.odd_extrapolation = p % 2 != 0;
  return r;
}

std::vector<ConvergenceRow> measure_convergence_report(
    const std::vector<std::pair<double, std::vector<PanelEntry>>>& runs,
    double lambda0) {
  const std::vector<PanelEntry>* base = nullptr;
  for (const auto& [lambda, panel] : runs)
    if (lambda == lambda0) base = &panel;
  if (base == nullptr)
    throw ConfigError("convergence report: no run at the reference lambda");
  for (const auto& [lambda, panel] : runs) {
    if (panel.size() != base->size())
      throw ConfigError("convergence report: observable panels differ");
    for (std::size_t i = 0; i < panel.size(); ++i)
      if (panel[i].observable != (*base)[i].observable)
        throw ConfigError("convergence report: observable panels differ");
  }
  std::vector<ConvergenceRow> rows;
  for (const auto& [lambda, panel] : runs) {
    if (lambda == lambda0) continue;
    for (std::size_t i = 0; i < panel.size(); ++i) {
      ConvergenceRow row;
      row.observable = panel[i].observable;
      row.lambda = lambda;
      row.mean = panel[i].mean;
      row.se = panel[i].se;
      row.dist = std::abs(panel[i].mean - (*base)[i].mean);
      row.dist_se = std::hypot(panel[i].se, (*base)[i].se);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace pairflow
