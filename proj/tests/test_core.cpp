#include <cmath>

#include "doctest.h"
#include "mpmd/delay.hpp"
#include "mpmd/errors.hpp"
#include "mpmd/metric.hpp"
#include "mpmd/rng.hpp"
#include "mpmd/solution.hpp"
#include "support.hpp"

using namespace mpmd;

TEST_CASE("validate_metric accepts the two-point instance") {
  MetricSpace m = validate_metric({{0.0, 1.5}, {1.5, 0.0}}, {1.0, 1.0});
  CHECK(m.n() == 2);
  CHECK(m.d(0, 1) == doctest::Approx(1.5));
  CHECK(m.total_rate() == doctest::Approx(2.0));
  CHECK(m.d_max() == doctest::Approx(1.5));
}

TEST_CASE("validate_metric accepts a single point") {
  MetricSpace m = validate_metric({{0.0}}, {1.0});
  CHECK(m.n() == 1);
  CHECK(m.d_max() == 0.0);
}

TEST_CASE("validate_metric rejects bad inputs") {
  try {
    (void)validate_metric({{0.0, 10.0, 1.0}, {10.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}, {1, 1, 1});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TriangleViolation);
  }
  try {
    (void)validate_metric({{0.0, 1.0}, {2.0, 0.0}}, {1, 1});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AsymmetricDistance);
  }
  try {
    (void)validate_metric({{0.0, 1.0}, {1.0, 0.0}}, {1.0, 0.0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveRate);
  }
}

TEST_CASE("random metrics satisfy the triangle inequality") {
  for (uint64_t s = 0; s < 50; ++s) {
    MetricSpace m = testing::random_metric(2 + static_cast<int>(s % 12), 900 + s);
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j)
        for (int k = 0; k < m.n(); ++k) CHECK(m.d(i, k) <= m.d(i, j) + m.d(j, k) + 1e-9);
  }
}

TEST_CASE("eval_delay basics") {
  CHECK(eval_delay(DelaySpec::linear(), 0.75) == doctest::Approx(0.75));
  CHECK(eval_delay(DelaySpec::power(2.0), 3.0) == doctest::Approx(9.0));
  CHECK(eval_delay(DelaySpec::power(0.5), 4.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)eval_delay(DelaySpec::linear(), -0.1), Error);
}

TEST_CASE("linear delay is the identity on a million random draws") {
  Rng rng(7);
  DelaySpec lin = DelaySpec::linear();
  bool exact = true;
  for (int i = 0; i < 1000000; ++i) {
    double t = rng.next_uniform(0.0, 1e6);
    exact = exact && lin.eval(t) == t;
  }
  CHECK(exact);
}

TEST_CASE("power(1) agrees with linear") {
  Rng rng(8);
  DelaySpec p1 = DelaySpec::power(1.0);
  for (int i = 0; i < 10000; ++i) {
    double t = rng.next_uniform(0.0, 100.0);
    CHECK(p1.eval(t) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("table delay interpolates and extrapolates with the final slope") {
  DelaySpec tab = DelaySpec::table({0.0, 1.0, 3.0}, {0.0, 2.0, 3.0});
  CHECK(tab.eval(0.0) == 0.0);
  CHECK(tab.eval(0.5) == doctest::Approx(1.0));
  CHECK(tab.eval(2.0) == doctest::Approx(2.5));
  CHECK(tab.eval(5.0) == doctest::Approx(4.0));  // slope 0.5 past t=3
  CHECK(tab.inverse(2.5) == doctest::Approx(2.0));
  CHECK(std::isinf(tab.sup()));
  DelaySpec flat = DelaySpec::table({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0});
  CHECK(flat.sup() == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)DelaySpec::table({0.5, 1.0}, {0.0, 1.0}), Error);
  CHECK_THROWS_AS((void)DelaySpec::table({0.0, 1.0}, {0.0, -1.0}), Error);
}

TEST_CASE("solution_cost on the two-point worked run") {
  MetricSpace m = validate_metric({{0.0, 1.5}, {1.5, 0.0}}, {1.0, 1.0});
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {1, 0.5}});
  Solution sol;
  sol.pairs.push_back(MatchedPair{0, 1, 1.0});
  CostBreakdown c = solution_cost(sol, seq, m, DelaySpec::linear());
  CHECK(c.connection == doctest::Approx(1.5));
  CHECK(c.delay == doctest::Approx(1.5));
  CHECK(c.penalty == 0.0);
  CHECK(c.total == doctest::Approx(3.0));
}

TEST_CASE("solution_cost handles empty and penalty cases") {
  MetricSpace m = validate_metric({{0.0}}, {1.0});
  RequestSequence empty;
  CostBreakdown zero = solution_cost(Solution{}, empty, m, DelaySpec::linear());
  CHECK(zero.total == 0.0);

  RequestSequence seq = testing::make_sequence({{0, 0.0}, {0, 1.0}, {0, 2.0}});
  Solution sol;
  sol.pairs.push_back(MatchedPair{0, 1, 2.0});  // connection 0, delay 2 + 1
  sol.cleared.push_back(ClearedRequest{2, 2.0});
  CostBreakdown c = solution_cost(sol, seq, m, DelaySpec::linear(), 5.0);
  CHECK(c.delay == doctest::Approx(3.0));
  CHECK(c.penalty == doctest::Approx(5.0));
  CHECK(c.total == doctest::Approx(8.0));
}

TEST_CASE("solution_cost rejects bad covers") {
  MetricSpace m = validate_metric({{0.0}}, {1.0});
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {0, 1.0}});
  Solution none;
  CHECK_THROWS_AS((void)solution_cost(none, seq, m, DelaySpec::linear()), Error);
  Solution dup;
  dup.pairs.push_back(MatchedPair{0, 0, 1.0});
  CHECK_THROWS_AS((void)solution_cost(dup, seq, m, DelaySpec::linear()), Error);
  Solution early;
  early.pairs.push_back(MatchedPair{0, 1, 0.5});
  CHECK_THROWS_AS((void)solution_cost(early, seq, m, DelaySpec::linear()), Error);
}

TEST_CASE("solution_cost is invariant under pair permutation") {
  MetricSpace m = testing::random_metric(5, 42);
  RequestSequence seq =
      testing::make_sequence({{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}, {4, 0.5}, {0, 0.6}});
  Solution a;
  a.pairs = {MatchedPair{0, 3, 1.0}, MatchedPair{1, 4, 1.5}, MatchedPair{2, 5, 2.0}};
  Solution b;
  b.pairs = {MatchedPair{2, 5, 2.0}, MatchedPair{0, 3, 1.0}, MatchedPair{1, 4, 1.5}};
  CostBreakdown ca = solution_cost(a, seq, m, DelaySpec::linear());
  CostBreakdown cb = solution_cost(b, seq, m, DelaySpec::linear());
  CHECK(ca.total == doctest::Approx(cb.total).epsilon(1e-12));
}

TEST_CASE("breakdown total equals the sum of parts") {
  MetricSpace m = testing::random_metric(4, 77);
  RequestSequence seq = testing::make_sequence({{0, 0.0}, {1, 1.0}, {2, 2.0}, {3, 3.0}});
  Solution sol;
  sol.pairs = {MatchedPair{0, 2, 2.5}, MatchedPair{1, 3, 3.5}};
  CostBreakdown c = solution_cost(sol, seq, m, DelaySpec::linear());
  CHECK(c.total == doctest::Approx(c.connection + c.delay + c.penalty).epsilon(1e-9));
}

TEST_CASE("rescale_metric scales distances and inversely scales rates") {
  MetricSpace m = testing::random_metric(6, 11);
  MetricSpace s = rescale_metric(m, 2.0);
  CHECK(s.d(1, 4) == doctest::Approx(2.0 * m.d(1, 4)));
  CHECK(s.rate(3) == doctest::Approx(0.5 * m.rate(3)));
}
