#include "pairflow/noise.hpp"

#include <cmath>
#include <limits>

#include "pairflow/errors.hpp"
#include "pairflow/hash.hpp"

namespace pairflow {

NoiseModel::NoiseModel(const Lattice& lattice, Kind kind)
    : lattice_(&lattice),
      kind_(kind),
      q_(lattice.canonical_modes().size(), 0.0) {}

NoiseModel NoiseModel::finite_band(const Lattice& lattice, int mode_count,
                                   double q) {
  if (mode_count < 0)
    throw ConfigError("noise.modes: forced mode count must be >= 0");
  if (q < 0.0) throw ConfigError("noise.q: per-mode variance must be >= 0");
  NoiseModel model(lattice, Kind::finite_band);
  model.band_count_ = mode_count;
  model.amplitude_ = q;
  const auto& canon = lattice.canonical_modes();
  int in_band = 0;
  for (const Mode& m : canon)
    if (lattice.in_dealias_band(m.k1, m.k2)) ++in_band;
  if (mode_count > in_band)
    throw ConfigError("noise.modes: " + std::to_string(mode_count) +
                      " forced modes exceed the " + std::to_string(in_band) +
                      " resolved (dealiased) modes at this resolution");
  int assigned = 0;
  for (std::size_t j = 0; j < canon.size() && assigned < mode_count; ++j) {
    if (!lattice.in_dealias_band(canon[j].k1, canon[j].k2)) continue;
    model.q_[j] = q;
    ++assigned;
  }
  for (std::size_t j = 0; j < canon.size(); ++j) {
    model.trace_q_ += 2.0 * model.q_[j];
    model.trace_aq_ += 2.0 * lattice.gamma(canon[j]) * model.q_[j];
  }
  return model;
}

NoiseModel NoiseModel::power_law(const Lattice& lattice, double amplitude,
                                 double exponent) {
  if (!(exponent > 1.0 && exponent < 2.0))
    throw ConfigError(
        "noise.exponent: power-law decay a must satisfy 1 < a < 2 (a <= 1 is "
        "not trace class, a >= 2 leaves no admissible full-spectrum "
        "regularity); got a = " +
        std::to_string(exponent));
  if (amplitude < 0.0)
    throw ConfigError("noise.amplitude: power-law amplitude must be >= 0");
  NoiseModel model(lattice, Kind::power_law);
  model.amplitude_ = amplitude;
  model.exponent_ = exponent;
  const auto& canon = lattice.canonical_modes();
  // Wavevectors sharing a Stokes shell share the q of the shell's first
  // sorted index, so the spectrum stays isotropic within shells.
  std::size_t shell_start = 0;
  for (std::size_t j = 0; j < canon.size(); ++j) {
    if (lattice.gamma(canon[j]) != lattice.gamma(canon[shell_start]))
      shell_start = j;
    if (!lattice.in_dealias_band(canon[j].k1, canon[j].k2)) continue;
    model.q_[j] =
        amplitude * std::pow(double(shell_start + 1), -exponent);
  }
  for (std::size_t j = 0; j < canon.size(); ++j) {
    model.trace_q_ += 2.0 * model.q_[j];
    model.trace_aq_ += 2.0 * lattice.gamma(canon[j]) * model.q_[j];
  }
  return model;
}

double NoiseModel::alpha0_sup() const {
  if (kind_ == Kind::finite_band)
    return std::numeric_limits<double>::infinity();
  // q_j ~ j^-a and gamma_j ~ j: sum q_j gamma_j^(2 alpha0) converges iff
  // 2 alpha0 - a < -1.
  return 0.5 * (exponent_ - 1.0);
}

std::uint64_t NoiseModel::hash() const {
  Fnv1a h;
  h.update_value(static_cast<int>(kind_));
  h.update_value(lattice_->n());
  h.update_value(lattice_->length());
  h.update_value(amplitude_);
  h.update_value(exponent_);
  h.update_value(band_count_);
  for (double v : q_) h.update_value(v);
  return h.digest();
}

SpectrumReport spectrum_report(const NoiseModel& model) {
  SpectrumReport report;
  const Lattice& lat = model.lattice();
  const auto& canon = lat.canonical_modes();
  for (std::size_t j = 0; j < canon.size(); ++j)
    if (model.q(j) > 0.0)
      report.rows.push_back({canon[j], lat.gamma(canon[j]), model.q(j)});
  report.trace_q = model.trace_q();
  report.trace_aq = model.trace_aq();
  report.alpha0_sup = model.alpha0_sup();
  if (model.kind() == NoiseModel::Kind::finite_band)
    report.regularity_note =
        "finite band: sum q_j gamma_j^(2 a0) is finite for every a0";
  else
    report.regularity_note =
        "power law a = " + std::to_string(model.exponent()) +
        ": admissible regularity a0 < (a-1)/2 = " +
        std::to_string(model.alpha0_sup());
  return report;
}

std::uint32_t StreamId::tag() const {
  if (component > 1)
    throw ConfigError("noise stream component must be 0 or 1");
  if (replica >= (1u << 14))
    throw ConfigError("replica index exceeds 2^14 stream slots");
  if (lambda_index >= (1u << 14))
    throw ConfigError("lambda index exceeds 2^14 stream slots");
  return component | (replica << 4) | (lambda_index << 18);
}

SpectralField wiener_increment(NoiseStream& stream, const NoiseModel& model,
                               double dt) {
  if (!(dt > 0.0)) throw NumericsError("wiener_increment: dt must be > 0");
  const Lattice& lat = model.lattice();
  SpectralField dw(lat);
  const auto& canon = lat.canonical_modes();
  for (std::size_t j = 0; j < canon.size(); ++j) {
    const double qj = model.q(j);
    if (qj == 0.0) continue;
    const Complex z = stream.unit_gaussian(std::uint32_t(j));
    dw.assign_pair(canon[j].k1, canon[j].k2, std::sqrt(0.5 * qj * dt) * z);
  }
  stream.advance();
  return dw;
}

void accumulate_ou_noise(SpectralField& out, NoiseStream& stream,
                         const NoiseModel& model, double nu, double dt,
                         double scale) {
  if (!(dt > 0.0)) throw NumericsError("ou noise: dt must be > 0");
  if (!(nu > 0.0)) throw NumericsError("ou noise: nu must be > 0");
  const Lattice& lat = model.lattice();
  const auto& canon = lat.canonical_modes();
  for (std::size_t j = 0; j < canon.size(); ++j) {
    const double qj = model.q(j);
    if (qj == 0.0) continue;
    const double g = lat.gamma(canon[j]);
    const double var = qj * (-std::expm1(-2.0 * nu * g * dt)) / (2.0 * nu * g);
    const Complex z = stream.unit_gaussian(std::uint32_t(j));
    out.accumulate_pair(canon[j].k1, canon[j].k2,
                        scale * std::sqrt(0.5 * var) * z);
  }
  stream.advance();
}

void ou_step(SpectralField& z, NoiseStream& stream, const NoiseModel& model,
             double nu, double dt) {
  stokes_semigroup_inplace(z, dt, nu);
  accumulate_ou_noise(z, stream, model, nu, dt);
}

}  // namespace pairflow
