#include <doctest.h>

#include <cmath>

#include "pairflow/errors.hpp"
#include "pairflow/fourier.hpp"
#include "pairflow/structure.hpp"

using namespace pairflow;

TEST_CASE("constant field has identically zero structure functions") {
  const Lattice lat(16);
  PhysicalField f(lat);
  for (double& v : f.vx) v = 0.7;
  for (double& v : f.vy) v = -0.2;
  StructureFunctionTable table(lat, {2, 3, 4});
  table.accumulate(f);
  for (int p : table.orders())
    for (int m = 0; m <= table.separations(); ++m) {
      CHECK(table.signed_moment(p, m) == 0.0);
      CHECK(table.abs_moment(p, m) == 0.0);
    }
  // the fit refuses a table with no positive entries
  CHECK_THROWS_AS(fit_scaling(table, 2, 0.0, 10.0), InsufficientDataError);
}

TEST_CASE("single-mode direction bookkeeping: longitudinal increments vanish") {
  // e(1,0) = (0,1): u_y varies along x only; u_x is identically zero.
  // Longitudinal means x-increments of u_x and y-increments of u_y, so the
  // whole table is at rounding level.
  const Lattice lat(32);
  FourierWorkspace ws(lat);
  SpectralField f(lat);
  f.assign_pair(1, 0, Complex(0.8, 0.3));
  const PhysicalField phys = ws.to_physical(f);
  StructureFunctionTable table(lat, {2, 3});
  table.accumulate(phys);
  for (int m = 1; m <= table.separations(); ++m) {
    CHECK(std::abs(table.abs_moment(2, m)) < 1e-28);
    CHECK(std::abs(table.abs_moment(3, m)) < 1e-40);
  }
}

TEST_CASE("even orders: signed and absolute moments coincide bitwise") {
  const Lattice lat(16);
  FourierWorkspace ws(lat);
  const SpectralField f = gaussian_random_field(
      lat, [](double g) { return std::pow(g, -2.0); }, 4321, 0, true);
  StructureFunctionTable table(lat, {2, 4, 6});
  table.accumulate(ws.to_physical(f));
  for (int p : {2, 4, 6})
    for (int m = 1; m <= table.separations(); ++m)
      CHECK(table.signed_moment(p, m) == table.abs_moment(p, m));
}

TEST_CASE("merge equals accumulation over the concatenated snapshot stream") {
  const Lattice lat(16);
  FourierWorkspace ws(lat);
  StructureFunctionTable whole(lat, {2, 3});
  StructureFunctionTable left(lat, {2, 3}), right(lat, {2, 3});
  for (std::uint32_t i = 0; i < 6; ++i) {
    const PhysicalField f = ws.to_physical(gaussian_random_field(
        lat, [](double g) { return std::pow(g, -2.0); }, 99, i, true));
    whole.accumulate(f);
    (i < 3 ? left : right).accumulate(f);
  }
  left.merge(right);
  // merged partial sums regroup the additions; equality is to reassociation
  for (int m = 1; m <= whole.separations(); ++m) {
    CHECK(left.count(m) == whole.count(m));
    const double scale = whole.abs_moment(3, m);
    CHECK(std::abs(left.signed_moment(3, m) - whole.signed_moment(3, m)) <=
          1e-12 * scale);
    CHECK(std::abs(left.abs_moment(3, m) - whole.abs_moment(3, m)) <=
          1e-12 * scale);
  }
}

TEST_CASE("exact power-law data recovers zeta_p = p/3 to 1e-12") {
  const Lattice lat(64);
  const double h = lat.length() / lat.n();
  std::vector<double> l, s;
  for (int p : {2, 3, 4, 6}) {
    l.clear();
    s.clear();
    for (int m = 1; m <= lat.n() / 2; ++m) {
      l.push_back(m * h);
      s.push_back(std::pow(m * h, double(p) / 3.0));
    }
    const ScalingFit fit = fit_scaling_points(l, s, p, 0.0, 100.0);
    CHECK(std::abs(fit.zeta - double(p) / 3.0) <= 1e-12);
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.se <= 1e-12);
  }
}

TEST_CASE("fit error lists the usable separations") {
  std::vector<double> l = {0.1, 0.2, 0.3, 0.4};
  std::vector<double> s = {1.0, 1.0, 0.0, 0.0};
  try {
    fit_scaling_points(l, s, 2, 0.0, 1.0);
    FAIL("expected InsufficientDataError");
  } catch (const InsufficientDataError& e) {
    const std::string what = e.what();
    CHECK(what.find("0.1") != std::string::npos);
    CHECK(what.find("0.2") != std::string::npos);
  }
}

TEST_CASE("rescaling: the estimator is exactly homogeneous of degree p") {
  const Lattice lat(16);
  FourierWorkspace ws(lat);
  std::vector<PhysicalField> snaps;
  StructureFunctionTable table(lat, {2, 3, 4, 6});
  for (std::uint32_t i = 0; i < 4; ++i) {
    snaps.push_back(ws.to_physical(gaussian_random_field(
        lat, [](double g) { return std::pow(g, -2.0); }, 321, i, true)));
    table.accumulate(snaps.back());
  }
  SUBCASE("lambda = 1 is the identity") {
    const RescalingCheck c = rescaling_check(table, snaps, 1.0);
    CHECK(c.pass);
    CHECK(c.max_rel_err == 0.0);
  }
  SUBCASE("lambda = 2") {
    CHECK(rescaling_check(table, snaps, 2.0).pass);
  }
  SUBCASE("lambda = -0.5 (signed odd powers flip)") {
    CHECK(rescaling_check(table, snaps, -0.5).pass);
  }
  SUBCASE("lambda = 0.1 underflow guard at p = 6") {
    CHECK(rescaling_check(table, snaps, 0.1).pass);
  }
}

TEST_CASE("white-noise snapshot has flat structure functions") {
  const Lattice lat(32);
  FourierWorkspace ws(lat);
  StructureFunctionTable table(lat, {2});
  for (std::uint32_t i = 0; i < 24; ++i)
    table.accumulate(ws.to_physical(gaussian_random_field(
        lat, [](double) { return 1.0; }, 777, i, false)));
  const double h = lat.length() / lat.n();
  const ScalingFit fit = fit_scaling(table, 2, h, lat.n() * h / 2.0);
  CHECK(std::abs(fit.zeta) < 0.1);
}

TEST_CASE("structure_moment matches the table entry") {
  const Lattice lat(16);
  FourierWorkspace ws(lat);
  const PhysicalField f = ws.to_physical(gaussian_random_field(
      lat, [](double g) { return std::pow(g, -2.0); }, 31, 0, true));
  StructureFunctionTable table(lat, {2});
  table.accumulate(f);
  for (int m : {1, 3, 8})
    CHECK(structure_moment(f, 2, m, false) ==
          doctest::Approx(table.signed_moment(2, m)).epsilon(1e-14));
  CHECK_THROWS_AS(structure_moment(f, 2, 0, false), ConfigError);
  CHECK_THROWS_AS(structure_moment(f, 2, 9, false), ConfigError);
}
