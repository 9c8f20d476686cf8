#include <doctest.h>

#include <cmath>

#include "pairflow/errors.hpp"
#include "pairflow/statistics.hpp"

using namespace pairflow;

namespace {

StatsAccumulator feed(const std::vector<std::vector<double>>& rows,
                      int target_batches = 4) {
  StatsAccumulator acc({"a", "b"}, target_batches);
  for (const auto& r : rows) acc.append(r);
  return acc;
}

}  // namespace

TEST_CASE("merge reproduces single-pass moments over concatenated data") {
  std::vector<std::vector<double>> all;
  for (int i = 0; i < 137; ++i)
    all.push_back({std::sin(0.1 * i) + 0.01 * i, std::cos(0.2 * i)});

  const StatsAccumulator whole = feed(all);
  for (std::size_t cut : {1ul, 40ul, 64ul, 136ul}) {
    StatsAccumulator left =
        feed({all.begin(), all.begin() + std::ptrdiff_t(cut)});
    const StatsAccumulator right =
        feed({all.begin() + std::ptrdiff_t(cut), all.end()});
    left.merge(right);
    CHECK(left.count() == whole.count());
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(left.mean(c) ==
            doctest::Approx(whole.mean(c)).epsilon(1e-12));
      CHECK(left.variance(c) ==
            doctest::Approx(whole.variance(c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("merge is commutative on moments") {
  std::vector<std::vector<double>> xs, ys;
  for (int i = 0; i < 71; ++i) xs.push_back({0.3 * i, 1.0 / (1 + i)});
  for (int i = 0; i < 29; ++i) ys.push_back({-0.1 * i, std::sqrt(1.0 + i)});
  StatsAccumulator ab = feed(xs);
  ab.merge(feed(ys));
  StatsAccumulator ba = feed(ys);
  ba.merge(feed(xs));
  CHECK(ab.mean(0) == doctest::Approx(ba.mean(0)).epsilon(1e-13));
  CHECK(ab.mean(1) == doctest::Approx(ba.mean(1)).epsilon(1e-13));
  CHECK(ab.variance(0) == doctest::Approx(ba.variance(0)).epsilon(1e-12));
}

TEST_CASE("observation order does not move moments beyond reassociation") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 500; ++i)
    rows.push_back({std::sin(1.7 * i) * std::exp(0.001 * i), 0.0});
  StatsAccumulator forward = feed(rows);
  std::vector<std::vector<double>> rev(rows.rbegin(), rows.rend());
  StatsAccumulator backward = feed(rev);
  CHECK(forward.mean(0) ==
        doctest::Approx(backward.mean(0)).epsilon(1e-13));
}

TEST_CASE("batch machinery: adaptive doubling keeps the target count") {
  StatsAccumulator acc({"x"}, 10);
  for (int i = 0; i < 10000; ++i) {
    const double v = double(i % 7);
    acc.append({&v, 1});
  }
  CHECK(acc.complete_batches() >= 10);
  CHECK(acc.complete_batches() < 20);
  CHECK(acc.batch_stderr(0) >= 0.0);
  // batch means average back to the global mean of complete batches
  const std::vector<double> means = acc.batch_means(0);
  double avg = 0.0;
  for (double m : means) avg += m;
  avg /= double(means.size());
  CHECK(avg == doctest::Approx(acc.mean(0)).epsilon(1e-3));
}

TEST_CASE("insufficient data paths throw the dedicated error") {
  StatsAccumulator acc({"x"}, 4);
  CHECK_THROWS_AS(acc.mean(0), InsufficientDataError);
  const double v = 1.0;
  acc.append({&v, 1});
  CHECK_THROWS_AS(acc.batch_stderr(0), InsufficientDataError);
  CHECK_THROWS_AS(enstrophy_identity_check(StatsAccumulator({"v2_x"}, 4), 1.0,
                                           1.0),
                  InsufficientDataError);
}

TEST_CASE("identity checks: trivial zero-noise case and p=2 specialization") {
  const Lattice lat(16);
  const NoiseModel silent = NoiseModel::silent(lat);
  PairObserver observer(lat, silent, 0.0, false, {2, 4}, 16);
  PairState state(lat);
  for (int i = 0; i < 200; ++i) observer.observe(state);

  // Q = 0 on the zero state: both sides vanish and the check passes
  const IdentityReport enstrophy =
      enstrophy_identity_check(observer.stats(), silent.trace_q(), 0.5);
  CHECK(enstrophy.lhs == 0.0);
  CHECK(enstrophy.rhs == 0.0);
  CHECK(enstrophy.pass);

  // p = 2 reduces to the enstrophy balance exactly
  const IdentityReport p2 =
      p_moment_identity_check(observer.stats(), silent.trace_q(), 0.5, 2);
  CHECK(p2.lhs == enstrophy.lhs);
  CHECK(p2.rhs == enstrophy.rhs);

  const IdentityReport v2 = vorticity_moment_identity_check(
      observer.stats(), silent.trace_aq(), 0.5, 2);
  CHECK(v2.lhs == 0.0);
  CHECK(v2.pass);
}

TEST_CASE("convergence report distances and panel mismatch") {
  std::vector<std::pair<double, std::vector<PanelEntry>>> runs;
  runs.push_back({0.0, {{"energy", 1.00, 0.01}, {"s2", 0.50, 0.02}}});
  runs.push_back({0.2, {{"energy", 1.08, 0.01}, {"s2", 0.56, 0.02}}});
  runs.push_back({0.1, {{"energy", 1.02, 0.01}, {"s2", 0.52, 0.02}}});

  const std::vector<ConvergenceRow> rows =
      measure_convergence_report(runs, 0.0);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].observable == "energy");
  CHECK(rows[0].lambda == 0.2);
  CHECK(rows[0].dist == doctest::Approx(0.08));
  CHECK(rows[0].dist_se == doctest::Approx(std::hypot(0.01, 0.01)));
  CHECK(rows[2].lambda == 0.1);
  CHECK(rows[2].dist == doctest::Approx(0.02));

  // duplicated lambda run with identical panel has zero distance
  std::vector<std::pair<double, std::vector<PanelEntry>>> dup;
  dup.push_back({0.0, {{"energy", 1.0, 0.01}}});
  dup.push_back({0.3, {{"energy", 1.0, 0.01}}});
  CHECK(measure_convergence_report(dup, 0.0)[0].dist == 0.0);

  // constant observable integrates to the same value under any law
  std::vector<std::pair<double, std::vector<PanelEntry>>> ones;
  ones.push_back({0.0, {{"one", 1.0, 0.0}}});
  ones.push_back({0.4, {{"one", 1.0, 0.0}}});
  CHECK(measure_convergence_report(ones, 0.0)[0].dist == 0.0);

  std::vector<std::pair<double, std::vector<PanelEntry>>> bad;
  bad.push_back({0.0, {{"energy", 1.0, 0.01}}});
  bad.push_back({0.2, {{"other", 1.0, 0.01}}});
  CHECK_THROWS_AS(measure_convergence_report(bad, 0.0), ConfigError);
  CHECK_THROWS_AS(measure_convergence_report({}, 0.0), ConfigError);
}

TEST_CASE("merge-then-split reproduces the two-observation moments") {
  StatsAccumulator a({"x"}, 4), b({"x"}, 4);
  const double v1 = 2.0, v2 = 5.0;
  a.append({&v1, 1});
  b.append({&v2, 1});
  a.merge(b);
  CHECK(a.count() == 2);
  CHECK(a.mean(0) == 3.5);
  CHECK(a.variance(0) == doctest::Approx(4.5));
}
