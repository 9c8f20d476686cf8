#include <doctest.h>

#include <set>

#include "pairflow/errors.hpp"
#include "pairflow/lattice.hpp"

using namespace pairflow;

TEST_CASE("lattice enumerates a conjugation-closed mean-zero mode set") {
  const Lattice lat(16);
  std::set<std::pair<int, int>> seen;
  for (const Mode& m : lat.modes()) {
    CHECK((m.k1 != 0 || m.k2 != 0));
    CHECK(lat.gamma(m) > 0.0);
    seen.insert({m.k1, m.k2});
  }
  for (const Mode& m : lat.modes())
    CHECK(seen.count({-m.k1, -m.k2}) == 1);
  CHECK(lat.kmax() == 5);
  CHECK(lat.modes().size() == std::size_t((2 * 7 + 1) * (2 * 7 + 1) - 1));
  CHECK(lat.canonical_modes().size() == lat.modes().size() / 2);
}

TEST_CASE("canonical modes are sorted by shell with lexicographic ties") {
  const Lattice lat(16);
  const auto& canon = lat.canonical_modes();
  for (std::size_t j = 1; j < canon.size(); ++j) {
    const double ga = lat.gamma(canon[j - 1]);
    const double gb = lat.gamma(canon[j]);
    CHECK(ga <= gb);
    if (ga == gb)
      CHECK(std::pair(canon[j - 1].k1, canon[j - 1].k2) <
            std::pair(canon[j].k1, canon[j].k2));
  }
  // the four lowest-shell modes on the unit torus scale
  CHECK(canon[0] == Mode{0, 1});
  CHECK(canon[1] == Mode{1, 0});
  CHECK(lat.gamma(canon[2]) == 2.0);
  CHECK(lat.gamma(canon[3]) == 2.0);
}

TEST_CASE("polarization is even under negation and k-orthogonal") {
  const Lattice lat(16);
  for (const Mode& m : lat.modes()) {
    double e1, e2, f1, f2;
    lat.polarization(m.k1, m.k2, e1, e2);
    lat.polarization(-m.k1, -m.k2, f1, f2);
    CHECK(e1 == f1);
    CHECK(e2 == f2);
    CHECK(std::abs(e1 * m.k1 + e2 * m.k2) < 1e-15);
    CHECK(e1 * e1 + e2 * e2 == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("lattice rejects invalid resolutions") {
  CHECK_THROWS_AS(Lattice(15), ConfigError);
  CHECK_THROWS_AS(Lattice(2), ConfigError);
  CHECK_THROWS_AS(Lattice(0), ConfigError);
  CHECK_THROWS_AS(Lattice(-8), ConfigError);
  CHECK_THROWS_AS(Lattice(16, -1.0), ConfigError);
}

TEST_CASE("stokes eigenvalue uses the 2 pi / L wavevector scale") {
  const Lattice unit(16, kTwoPi);
  CHECK(unit.gamma(1, 0) == 1.0);
  CHECK(unit.gamma(1, 1) == 2.0);
  const Lattice stretched(16, 2.0 * kTwoPi);
  CHECK(stretched.gamma(2, 0) == 1.0);
}
