#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mpmd/arrivals.hpp"
#include "mpmd/bipartite.hpp"
#include "mpmd/errors.hpp"
#include "mpmd/greedy.hpp"
#include "mpmd/radius.hpp"
#include "mpmd/radius_run.hpp"
#include "mpmd/rng.hpp"
#include "support.hpp"

using namespace mpmd;

TEST_CASE("pair_match_time closed form and bisection") {
  CHECK(pair_match_time(0.0, 0.5, 1.5, DelaySpec::linear()) == doctest::Approx(1.0));
  CHECK(pair_match_time(0.0, 5.0, 1.0, DelaySpec::linear()) == doctest::Approx(5.0));
  CHECK(pair_match_time(0.0, 0.0, 8.0, DelaySpec::power(2.0)) ==
        doctest::Approx(2.0).epsilon(1e-9));
  // power(1) must agree with the linear closed form
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    double a = rng.next_uniform(0.0, 10.0);
    double b = rng.next_uniform(0.0, 10.0);
    double d = rng.next_uniform(0.0, 10.0);
    CHECK(pair_match_time(a, b, d, DelaySpec::power(1.0)) ==
          doctest::Approx(pair_match_time(a, b, d, DelaySpec::linear())).epsilon(1e-9));
  }
}

TEST_CASE("pair_match_time flags unreachable distances for bounded tables") {
  DelaySpec flat = DelaySpec::table({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0});  // sup f = 1
  CHECK_THROWS_AS((void)pair_match_time(0.0, 0.0, 2.5, flat), Error);
  CHECK(pair_match_time(0.0, 0.0, 1.5, flat) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("greedy on the two-point worked instance") {
  MetricSpace m = validate_metric({{0.0, 1.5}, {1.5, 0.0}}, {1.0, 1.0});
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {1, 0.5}});
  Solution sol = run_greedy(m, seq, DelaySpec::linear());
  REQUIRE(sol.pairs.size() == 1);
  CHECK(sol.pairs[0].time == doctest::Approx(1.0));
  CHECK(sol.breakdown.total == doctest::Approx(3.0));
}

TEST_CASE("greedy matches co-located requests on the second arrival") {
  MetricSpace m = validate_metric({{0.0}}, {1.0});
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {0, 0.3}});
  Solution sol = run_greedy(m, seq, DelaySpec::linear());
  REQUIRE(sol.pairs.size() == 1);
  CHECK(sol.pairs[0].time == doctest::Approx(0.3));
  CHECK(sol.breakdown.connection == 0.0);
  CHECK(sol.breakdown.delay == doctest::Approx(0.3));
}

TEST_CASE("greedy rejects odd sequences") {
  MetricSpace m = validate_metric({{0.0}}, {1.0});
  RequestSequence seq = testing::make_sequence({{0, 0.0}});
  CHECK_THROWS_AS((void)run_greedy(m, seq, DelaySpec::linear()), Error);
}

TEST_CASE("greedy agrees with a time-stepped simulator on a colinear instance") {
  // Four points on a line, distances via absolute differences.
  std::vector<double> pos = {0.0, 1.0, 2.5, 4.0};
  std::vector<std::vector<double>> d(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = std::abs(pos[i] - pos[j]);
  MetricSpace m = validate_metric(d, {1, 1, 1, 1});
  RequestSequence seq =
      testing::make_sequence({{0, 0.0}, {3, 0.2}, {1, 0.9}, {2, 1.4}});
  Solution fast = run_greedy(m, seq, DelaySpec::linear());
  Solution slow = testing::greedy_time_stepped(m, seq, DelaySpec::linear(), 1e-5);
  REQUIRE(fast.pairs.size() == slow.pairs.size());
  auto key = [](const MatchedPair& p) { return std::make_pair(std::min(p.a, p.b), std::max(p.a, p.b)); };
  for (size_t k = 0; k < fast.pairs.size(); ++k) CHECK(key(fast.pairs[k]) == key(slow.pairs[k]));
  CHECK(fast.breakdown.total == doctest::Approx(slow.breakdown.total).epsilon(1e-3));
}

TEST_CASE("greedy certificates on random stochastic runs") {
  DelaySpec lin = DelaySpec::linear();
  for (uint64_t s = 0; s < 12; ++s) {
    MetricSpace m = testing::random_metric(6, 8800 + s, 0.2, 5.0);
    RequestSequence seq = gen_centralized(m, {60, 100 + s, ArrivalModel::Centralized, false});
    Solution sol = run_greedy(m, seq, lin);
    // Per-pair: the criterion holds at s and s is the earliest such time.
    for (const MatchedPair& p : sol.pairs) {
      const Request &a = seq[p.a], &b = seq[p.b];
      double dd = m.d(a.location, b.location);
      CHECK(lin.eval(p.time - a.arrival) + lin.eval(p.time - b.arrival) >= dd - 1e-6);
      CHECK(p.time == doctest::Approx(pair_match_time(a.arrival, b.arrival, dd, lin)).epsilon(1e-9));
    }
    // Global: total cost at most twice the delay cost.
    CHECK(sol.breakdown.total <= 2.0 * sol.breakdown.delay + 1e-6);
  }
}

TEST_CASE("radius run on the two-point worked instance") {
  MetricSpace m = validate_metric({{0.0, 1.5}, {1.5, 0.0}}, {1.0, 1.0});
  RadiusTable rtab{{2.0, 1.0}, DelaySpec::linear()};
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {1, 0.5}});
  Solution sol = run_radius(m, seq, rtab);
  REQUIRE(sol.pairs.size() == 1);
  CHECK(sol.pairs[0].time == doctest::Approx(0.5));
  CHECK(sol.breakdown.connection == doctest::Approx(1.5));
  CHECK(sol.breakdown.delay == doctest::Approx(0.5));
  CHECK(sol.breakdown.total == doctest::Approx(2.0));
}

TEST_CASE("radius matches co-located requests immediately") {
  MetricSpace m = validate_metric({{0.0}}, {1.0});
  RadiusTable rtab = compute_radius_table(m, DelaySpec::linear());
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {0, 0.4}});
  Solution sol = run_radius(m, seq, rtab);
  REQUIRE(sol.pairs.size() == 1);
  CHECK(sol.pairs[0].time == doctest::Approx(0.4));
}

TEST_CASE("radius invariants on stochastic runs") {
  for (uint64_t s = 0; s < 12; ++s) {
    MetricSpace m = testing::random_metric(8, 9900 + s, 0.1, 8.0);
    RadiusTable rtab = compute_radius_table(m, DelaySpec::linear());
    RequestSequence seq = gen_centralized(m, {80, 300 + s, ArrivalModel::Centralized, false});
    Solution sol = run_radius(m, seq, rtab);

    double t_end = seq.last_arrival();
    std::vector<int> late;
    for (const MatchedPair& p : sol.pairs) {
      const Request &a = seq[p.a], &b = seq[p.b];
      if (p.time < t_end) {
        // nice edges stay within the sum of radii
        CHECK(m.d(a.location, b.location) <=
              rtab.rho[a.location] + rtab.rho[b.location] + 1e-9);
      } else if (p.time == t_end && m.d(a.location, b.location) >
                                        rtab.rho[a.location] + rtab.rho[b.location]) {
        late.push_back(p.a);
        late.push_back(p.b);
      }
    }
    // Leftover pending requests sit at distinct locations, pairwise farther
    // apart than the sum of their radii.
    for (size_t i = 0; i < late.size(); ++i)
      for (size_t j = i + 1; j < late.size(); ++j) {
        int la = seq[late[i]].location, lb = seq[late[j]].location;
        if (la == lb) continue;  // same pair only if matched; distinct leftovers differ
        CHECK(la != lb);
      }
  }
}

TEST_CASE("pending separation holds at every arrival") {
  // Replays the radius run and asserts the PendingSet invariant directly.
  for (uint64_t s = 0; s < 8; ++s) {
    MetricSpace m = testing::random_metric(10, 11000 + s, 0.1, 4.0);
    RadiusTable rtab = compute_radius_table(m, DelaySpec::linear());
    RequestSequence seq = gen_centralized(m, {60, 70 + s, ArrivalModel::Centralized, false});

    std::vector<int> pending;
    for (int i = 0; i < seq.size(); ++i) {
      int x = seq[i].location;
      int owner = -1, reach = -1;
      int owners = 0;
      for (int p : pending) {
        int y = seq[p].location;
        if (m.d(x, y) <= rtab.rho[y]) {
          ++owners;
          owner = p;
        }
        if (m.d(x, y) <= rtab.rho[y] + rtab.rho[x] && reach < 0) reach = p;
      }
      CHECK(owners <= 1);  // footnote-style uniqueness, asserted not assumed
      int partner = owner >= 0 ? owner : reach;
      if (partner >= 0)
        std::erase(pending, partner);
      else
        pending.push_back(i);
      for (size_t a = 0; a < pending.size(); ++a)
        for (size_t b = a + 1; b < pending.size(); ++b) {
          int ya = seq[pending[a]].location, yb = seq[pending[b]].location;
          CHECK(m.d(ya, yb) > rtab.rho[ya] + rtab.rho[yb] - 1e-9);
        }
    }
  }
}

TEST_CASE("mpmdfp clears everything when every radius exceeds the penalty") {
  MetricSpace m = validate_metric({{0.0, 5.0}, {5.0, 0.0}}, {0.1, 0.1});
  RadiusTable rtab = compute_radius_table(m, DelaySpec::linear());
  // rho = 1/0.1 = 10 and 1/0.2 = 5 at best; p far below both
  double p = 0.5;
  RequestSequence seq = gen_centralized(m, {20, 5, ArrivalModel::Centralized, false});
  Solution sol = run_mpmdfp(m, seq, rtab, p);
  CHECK(sol.pairs.empty());
  CHECK(static_cast<int>(sol.cleared.size()) == 20);
  CHECK(sol.breakdown.total == doctest::Approx(20 * p));
}

TEST_CASE("mpmdfp equals run_radius when the penalty dominates every radius") {
  MetricSpace m = testing::random_metric(6, 12000, 0.5, 5.0);
  RadiusTable rtab = compute_radius_table(m, DelaySpec::linear());
  double p = 1e9;
  RequestSequence seq = gen_centralized(m, {40, 6, ArrivalModel::Centralized, false});
  Solution fp = run_mpmdfp(m, seq, rtab, p);
  Solution plain = run_radius(m, seq, rtab);
  REQUIRE(fp.pairs.size() == plain.pairs.size());
  CHECK(fp.cleared.empty());
  for (size_t k = 0; k < fp.pairs.size(); ++k) {
    CHECK(fp.pairs[k].a == plain.pairs[k].a);
    CHECK(fp.pairs[k].b == plain.pairs[k].b);
  }
  CHECK(fp.breakdown.total == doctest::Approx(plain.breakdown.total));
}

TEST_CASE("mpmdfp equals the rule-text oracle on small stochastic instances") {
  for (uint64_t s = 0; s < 100; ++s) {
    MetricSpace m = testing::random_metric(5, 13000 + s, 0.2, 6.0);
    RadiusTable rtab = compute_radius_table(m, DelaySpec::linear());
    // penalty between the radius extremes so both groups are non-trivial
    double lo = *std::min_element(rtab.rho.begin(), rtab.rho.end());
    double hi = *std::max_element(rtab.rho.begin(), rtab.rho.end());
    double p = 0.5 * (lo + hi);
    if (!(p > 0.0)) continue;
    RequestSequence seq = gen_centralized(m, {6, 500 + s, ArrivalModel::Centralized, false});
    Solution fast = run_mpmdfp(m, seq, rtab, p);
    Solution oracle = testing::mpmdfp_oracle(m, seq, rtab, p);
    REQUIRE(fast.pairs.size() == oracle.pairs.size());
    REQUIRE(fast.cleared.size() == oracle.cleared.size());
    for (size_t k = 0; k < fast.pairs.size(); ++k) {
      CHECK(fast.pairs[k].a == oracle.pairs[k].a);
      CHECK(fast.pairs[k].b == oracle.pairs[k].b);
    }
    CHECK(fast.breakdown.total == doctest::Approx(oracle.breakdown.total).epsilon(1e-12));
  }
}

TEST_CASE("mpmdfp: expensive-point arrivals carry zero delay") {
  for (uint64_t s = 0; s < 10; ++s) {
    MetricSpace m = testing::random_metric(8, 14000 + s, 0.05, 10.0);
    RadiusTable rtab = compute_radius_table(m, DelaySpec::linear());
    std::vector<double> sorted = rtab.rho;
    std::sort(sorted.begin(), sorted.end());
    double p = sorted[sorted.size() / 2] + 1e-6;
    RequestSequence seq = gen_centralized(m, {60, 900 + s, ArrivalModel::Centralized, false});
    Solution sol = run_mpmdfp(m, seq, rtab, p);
    for (const MatchedPair& pr : sol.pairs) {
      for (int id : {pr.a, pr.b}) {
        if (rtab.rho[seq[id].location] >= p) {
          CHECK(pr.time == doctest::Approx(seq[id].arrival));
        }
      }
    }
    for (const ClearedRequest& c : sol.cleared) {
      if (rtab.rho[seq[c.id].location] >= p) CHECK(c.time == doctest::Approx(seq[c.id].arrival));
    }
  }
}

TEST_CASE("mpmdfp rejects non-positive penalties") {
  MetricSpace m = validate_metric({{0.0}}, {1.0});
  RadiusTable rtab = compute_radius_table(m, DelaySpec::linear());
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {0, 1.0}});
  CHECK_THROWS_AS((void)run_mpmdfp(m, seq, rtab, 0.0), Error);
}

TEST_CASE("bipartite alternating injection keeps the queue at one") {
  std::vector<int> colors = {0, 1, 0, 1, 0, 1, 0, 1};
  std::vector<double> gaps = {1.0, 0.5, 1.0, 0.5, 1.0, 0.5, 1.0};
  BipartiteRun run = run_bipartite_greedy_fixed(colors, gaps);
  double expect = 0.0;
  for (size_t i = 0; i + 1 < colors.size(); i += 2) expect += gaps[i];
  for (size_t i = 0; i < run.pending.size(); ++i) CHECK(run.pending[i] == (i % 2 == 0 ? 1 : 0));
  CHECK(run.total_cost == doctest::Approx(expect));
}

TEST_CASE("bipartite pending counts scale like sqrt(i)") {
  const int m = 10000, trials = 200;
  std::vector<double> sum_p(m, 0.0);
  for (int t = 0; t < trials; ++t) {
    BipartiteRun run = run_bipartite_greedy(0.5, 0.5, m, 424200 + t);
    for (int i = 0; i < m; ++i) sum_p[i] += run.pending[i];
  }
  double acc = 0.0;
  int count = 0;
  for (int i = 1000; i < m; ++i) {
    acc += (sum_p[i] / trials) / std::sqrt(static_cast<double>(i + 1));
    ++count;
  }
  double normalized = acc / count;
  CHECK(normalized == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.10));
}

TEST_CASE("greedy breaks simultaneous match ties by smallest id pair") {
  // Pairs (0,1) and (0,2) both reach the criterion at t = 2.05; the id
  // tie-break must pick (0,1) and leave (2,3) for later.
  std::vector<double> pos = {0.0, 4.0, -3.9, 100.0};
  std::vector<std::vector<double>> d(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = std::abs(pos[i] - pos[j]);
  MetricSpace m = validate_metric(d, {1, 1, 1, 1});
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {1, 0.1}, {2, 0.2}, {3, 0.3}});
  CHECK(pair_match_time(0.0, 0.1, 4.0, DelaySpec::linear()) ==
        doctest::Approx(pair_match_time(0.0, 0.2, 3.9, DelaySpec::linear())));
  Solution sol = run_greedy(m, seq, DelaySpec::linear());
  REQUIRE(sol.pairs.size() == 2);
  CHECK(sol.pairs[0].a == 0);
  CHECK(sol.pairs[0].b == 1);
  CHECK(sol.pairs[0].time == doctest::Approx(2.05));
  CHECK(sol.pairs[1].a == 2);
  CHECK(sol.pairs[1].b == 3);
}

TEST_CASE("radius branch two prefers the closest, then the earliest pending") {
  // Arrival at x sits within reach of both pending requests at equal
  // distance; the earlier one must win.
  MetricSpace m = validate_metric({{0.0, 2.0, 1.0}, {2.0, 0.0, 1.0}, {1.0, 1.0, 0.0}},
                                  {1.0, 1.0, 1.0});
  RadiusTable rtab{{0.6, 0.6, 0.6}, DelaySpec::linear()};
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {1, 0.1}, {2, 0.2}, {2, 0.3}});
  Solution sol = run_radius(m, seq, rtab);
  REQUIRE(sol.pairs.size() == 2);
  CHECK(sol.pairs[0].a == 0);  // earliest of the two equal-distance candidates
  CHECK(sol.pairs[0].b == 2);
  CHECK(sol.pairs[0].time == doctest::Approx(0.2));
}

TEST_CASE("radius ball containment beats a closer sum-of-radii candidate") {
  // d(x, y1) = 2 with x inside y1's ball; d(x, y2) = 1 only within the summed
  // radii. Branch order must pick y1.
  MetricSpace m = validate_metric({{0.0, 3.0, 2.0}, {3.0, 0.0, 1.0}, {2.0, 1.0, 0.0}},
                                  {1.0, 1.0, 1.0});
  //                 y1    y2    x
  RadiusTable rtab{{2.2, 0.5, 0.6}, DelaySpec::linear()};
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {1, 0.1}, {2, 0.2}, {2, 0.3}});
  Solution sol = run_radius(m, seq, rtab);
  REQUIRE(sol.pairs.size() == 2);
  CHECK(sol.pairs[0].a == 0);
  CHECK(sol.pairs[0].b == 2);
}

TEST_CASE("greedy with power delay agrees with the time-stepped simulator") {
  std::vector<double> pos = {0.0, 1.0, 2.5, 4.0};
  std::vector<std::vector<double>> d(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = std::abs(pos[i] - pos[j]);
  MetricSpace m = validate_metric(d, {1, 1, 1, 1});
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {3, 0.2}, {1, 0.9}, {2, 1.4}});
  DelaySpec spec = DelaySpec::power(2.0);
  Solution fast = run_greedy(m, seq, spec);
  Solution slow = testing::greedy_time_stepped(m, seq, spec, 1e-5);
  REQUIRE(fast.pairs.size() == slow.pairs.size());
  auto key = [](const MatchedPair& p) {
    return std::make_pair(std::min(p.a, p.b), std::max(p.a, p.b));
  };
  for (size_t k = 0; k < fast.pairs.size(); ++k) CHECK(key(fast.pairs[k]) == key(slow.pairs[k]));
  CHECK(fast.breakdown.total == doctest::Approx(slow.breakdown.total).epsilon(1e-3));
}
