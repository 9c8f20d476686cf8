#include <doctest.h>

#include <cmath>

#include "pairflow/errors.hpp"
#include "pairflow/fourier.hpp"
#include "pairflow/noise.hpp"

using namespace pairflow;

TEST_CASE("finite band: trace arithmetic counts conjugate pairs") {
  const Lattice lat(64);
  const NoiseModel model = NoiseModel::finite_band(lat, 4, 0.001);
  CHECK(model.trace_q() == doctest::Approx(0.008).epsilon(1e-14));
  // shells gamma = 1, 1, 2, 2
  CHECK(model.trace_aq() == doctest::Approx(2.0 * 0.001 * (1 + 1 + 2 + 2)));
  CHECK(std::isinf(model.alpha0_sup()));

  const SpectrumReport report = spectrum_report(model);
  CHECK(report.rows.size() == 4);
  CHECK(report.rows[0].gamma == 1.0);
  CHECK(report.rows[3].gamma == 2.0);
}

TEST_CASE("power law: sorted-index decay with shared shells") {
  const Lattice lat(32);
  const NoiseModel model = NoiseModel::power_law(lat, 1.0, 1.5);
  const auto& canon = lat.canonical_modes();
  // direct summation oracle for the traces
  double trq = 0.0;
  for (std::size_t j = 0; j < canon.size(); ++j) trq += 2.0 * model.q(j);
  CHECK(model.trace_q() == doctest::Approx(trq).epsilon(1e-14));
  // first shell (gamma=1) holds indices 1,2 -> q = C 1^-a; second shell 3^-a
  CHECK(model.q(0) == 1.0);
  CHECK(model.q(1) == 1.0);
  CHECK(model.q(2) == doctest::Approx(std::pow(3.0, -1.5)));
  CHECK(model.q(3) == model.q(2));
  // same-shell modes share q inside the forced (dealiased) band
  for (std::size_t j = 1; j < canon.size(); ++j) {
    if (!lat.in_dealias_band(canon[j].k1, canon[j].k2) ||
        !lat.in_dealias_band(canon[j - 1].k1, canon[j - 1].k2))
      continue;
    if (lat.gamma(canon[j]) == lat.gamma(canon[j - 1]))
      CHECK(model.q(j) == model.q(j - 1));
  }
  CHECK(model.alpha0_sup() == doctest::Approx(0.25));
}

TEST_CASE("power law rejects exponents outside (1,2)") {
  const Lattice lat(16);
  CHECK_THROWS_AS(NoiseModel::power_law(lat, 1.0, 2.5), ConfigError);
  CHECK_THROWS_AS(NoiseModel::power_law(lat, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(NoiseModel::power_law(lat, 1.0, 0.5), ConfigError);
  CHECK_NOTHROW(NoiseModel::power_law(lat, 1.0, 1.999));
}

TEST_CASE("silent model yields zero increments") {
  const Lattice lat(16);
  const NoiseModel model = NoiseModel::silent(lat);
  NoiseStream stream(9, {0, 0, 0});
  const SpectralField dw = wiener_increment(stream, model, 0.7);
  CHECK(h_norm(dw) == 0.0);
  CHECK(stream.position() == 1);
}

TEST_CASE("ou step with zero noise is the stokes semigroup") {
  const Lattice lat(16);
  const NoiseModel model = NoiseModel::silent(lat);
  NoiseStream stream(9, {0, 0, 0});
  SpectralField z(lat);
  z.assign_pair(1, 2, Complex(0.3, 0.4));
  z.assign_pair(3, 0, Complex(-0.1, 0.2));
  const SpectralField expect = stokes_semigroup(z, 0.25, 1.7);
  ou_step(z, stream, model, 1.7, 0.25);
  CHECK(h_distance(z, expect) == 0.0);
}

TEST_CASE("streams are reproducible and identity-separated") {
  const Lattice lat(16);
  const NoiseModel model = NoiseModel::finite_band(lat, 3, 0.5);
  NoiseStream a(1234, {0, 2, 1});
  NoiseStream b(1234, {0, 2, 1});
  const SpectralField da = wiener_increment(a, model, 0.1);
  const SpectralField db = wiener_increment(b, model, 0.1);
  CHECK(da == db);

  NoiseStream c(1234, {1, 2, 1});
  const SpectralField dc = wiener_increment(c, model, 0.1);
  CHECK(!(dc == da));

  // position seek replays
  a.seek(0);
  const SpectralField replay = wiener_increment(a, model, 0.1);
  CHECK(replay == da);
}

TEST_CASE("stream identity validation") {
  const StreamId bad_component{2, 0, 0};
  const StreamId bad_replica{0, 1u << 14, 0};
  const StreamId bad_lambda{0, 0, 1u << 14};
  const StreamId ok{1, 3, 2};
  CHECK_THROWS_AS(bad_component.tag(), ConfigError);
  CHECK_THROWS_AS(bad_replica.tag(), ConfigError);
  CHECK_THROWS_AS(bad_lambda.tag(), ConfigError);
  CHECK(ok.tag() == (1u | (3u << 4) | (2u << 18)));
}

TEST_CASE("sampled noise fields are real in collocation space") {
  const Lattice lat(32);
  FourierWorkspace ws(lat);
  const NoiseModel model = NoiseModel::power_law(lat, 0.8, 1.3);
  NoiseStream stream(77, {0, 0, 0});
  for (int i = 0; i < 8; ++i) {
    const SpectralField dw = wiener_increment(stream, model, 0.4);
    ws.to_physical(dw);
    CHECK(ws.last_imag_residue() <= 1e-13);
  }
}

TEST_CASE("wiener increment variance matches q dt") {
  const Lattice lat(16);
  const NoiseModel model = NoiseModel::finite_band(lat, 1, 2.0);
  const Mode forced = lat.canonical_modes()[0];
  NoiseStream stream(2024, {0, 0, 0});
  const double dt = 0.5;
  double mean_sq = 0.0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i)
    mean_sq += std::norm(wiener_increment(stream, model, dt).at(forced));
  mean_sq /= draws;
  CHECK(std::abs(mean_sq - 1.0) < 0.03);  // E|dW|^2 = q dt = 1, ~0.5% se
}

TEST_CASE("noise model hashes separate different spectra") {
  const Lattice lat(16);
  const NoiseModel a = NoiseModel::finite_band(lat, 4, 0.001);
  const NoiseModel b = NoiseModel::finite_band(lat, 4, 0.002);
  const NoiseModel c = NoiseModel::power_law(lat, 1.0, 1.5);
  CHECK(a.hash() != b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash() == NoiseModel::finite_band(lat, 4, 0.001).hash());
}
