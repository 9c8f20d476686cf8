#include <doctest.h>

#include <cmath>

#include "pairflow/advection.hpp"
#include "pairflow/errors.hpp"
#include "pairflow/structure.hpp"
#include "reference_ops.hpp"

using namespace pairflow;

namespace {
SpectralField dealiased_random(const Lattice& lat, std::uint32_t index) {
  return gaussian_random_field(
      lat, [](double g) { return std::pow(g, -1.5); }, 1234, index, true);
}
}  // namespace

TEST_CASE("self-advection of a single mode pair vanishes") {
  const Lattice lat(16);
  AdvectionOperator advection(lat);
  const SpectralField u = reference::single_mode(lat, 2, 1, Complex(0.7, -0.3));
  const SpectralField b = advection.apply(u, u);
  CHECK(h_norm(b) <= 1e-13 * h_norm(u));
}

TEST_CASE("two orthogonal modes interact exactly on modes (1,+-1)") {
  const Lattice lat(8);
  AdvectionOperator advection(lat);
  const SpectralField u = reference::single_mode(lat, 1, 0, Complex(1.0, 0.0));
  const SpectralField v = reference::single_mode(lat, 0, 1, Complex(1.0, 0.0));
  const SpectralField b = advection.apply(u, v);

  CHECK(h_norm(b) > 0.0);
  for (const Mode& m : lat.modes()) {
    const bool expected = std::abs(m.k1) == 1 && std::abs(m.k2) == 1;
    if (!expected) CHECK(std::abs(b.at(m)) <= 1e-15);
  }
  const SpectralField oracle = reference::direct_advection(u, v);
  CHECK(h_distance(b, oracle) <= 1e-14 * (1.0 + h_norm(oracle)));
}

TEST_CASE("pseudo-spectral advection matches the direct convolution") {
  const Lattice lat(8);
  AdvectionOperator advection(lat);
  for (std::uint32_t i = 0; i < 20; ++i) {
    const SpectralField u = dealiased_random(lat, 2 * i);
    const SpectralField v = dealiased_random(lat, 2 * i + 1);
    const SpectralField fast = advection.apply(u, v);
    const SpectralField slow = reference::direct_advection(u, v);
    CHECK(h_distance(fast, slow) <= 1e-13 * (1.0 + h_norm(slow)));
  }
}

TEST_CASE("advection is skew-symmetric and energy-neutral") {
  const Lattice lat(32);
  AdvectionOperator advection(lat);
  for (std::uint32_t i = 0; i < 25; ++i) {
    const SpectralField u = dealiased_random(lat, 3 * i);
    const SpectralField v = dealiased_random(lat, 3 * i + 1);
    const SpectralField z = dealiased_random(lat, 3 * i + 2);
    const SpectralField buv = advection.apply(u, v);
    const SpectralField buz = advection.apply(u, z);
    const double nu_ = h_norm(u), nv = h_norm(v), nz = h_norm(z);
    CHECK(std::abs(h_inner(buv, v)) <= 1e-12 * nu_ * nv * nv);
    const double t1 = h_inner(buv, z);
    const double t2 = h_inner(buz, v);
    CHECK(std::abs(t1 + t2) <=
          1e-12 * std::max({std::abs(t1), std::abs(t2), nu_ * nv * nz}));
  }
}

TEST_CASE("torus vorticity identity for the self term only") {
  const Lattice lat(32);
  AdvectionOperator advection(lat);
  double cross_seen = 0.0;
  for (std::uint32_t i = 0; i < 25; ++i) {
    const SpectralField u = dealiased_random(lat, 5 * i);
    const SpectralField buu = advection.apply(u, u);
    const SpectralField au = apply_stokes_power(u, 1.0);
    CHECK(std::abs(h_inner(buu, au)) <= 1e-11 * h_norm(buu) * h_norm(au));
    // the mixed form <B(v,u), Au> does not vanish
    const SpectralField v = dealiased_random(lat, 5 * i + 1);
    const SpectralField bvu = advection.apply(v, u);
    cross_seen = std::max(
        cross_seen, std::abs(h_inner(bvu, au)) / (h_norm(bvu) * h_norm(au)));
  }
  CHECK(cross_seen > 1e-6);
}

TEST_CASE("bilinearity in both slots at machine precision") {
  const Lattice lat(16);
  AdvectionOperator advection(lat);
  const SpectralField u1 = dealiased_random(lat, 70);
  const SpectralField u2 = dealiased_random(lat, 71);
  const SpectralField v = dealiased_random(lat, 72);
  const double alpha = 1.7, beta = -0.4;

  SpectralField combo = u1;
  combo *= alpha;
  SpectralField tmp = u2;
  tmp *= beta;
  combo += tmp;

  SpectralField expect = advection.apply(u1, v);
  expect *= alpha;
  SpectralField second = advection.apply(u2, v);
  second *= beta;
  expect += second;
  CHECK(h_distance(advection.apply(combo, v), expect) <=
        1e-13 * (1.0 + h_norm(expect)));

  // second slot
  expect = advection.apply(v, u1);
  expect *= alpha;
  second = advection.apply(v, u2);
  second *= beta;
  expect += second;
  CHECK(h_distance(advection.apply(v, combo), expect) <=
        1e-13 * (1.0 + h_norm(expect)));
}

TEST_CASE("advection output is dealiased exactly") {
  const Lattice lat(20);
  AdvectionOperator advection(lat);
  // feed full-band (aliased) inputs; the output must still be truncated
  const SpectralField u = gaussian_random_field(
      lat, [](double) { return 1.0; }, 77, 0, false);
  const SpectralField v = gaussian_random_field(
      lat, [](double) { return 1.0; }, 77, 1, false);
  const SpectralField b = advection.apply(u, v);
  CHECK(dealias_clean(b));
}

TEST_CASE("advection rejects lattice mismatches") {
  const Lattice a(16), b(32);
  AdvectionOperator advection(a);
  SpectralField fa(a), fb(b);
  CHECK_THROWS_AS(advection.apply(fa, fb), NumericsError);
  CHECK_THROWS_AS(advection.apply(fb, fa), NumericsError);
}
