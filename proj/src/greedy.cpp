#include "mpmd/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>
#include <vector>

#include "mpmd/errors.hpp"

namespace mpmd {

double pair_match_time(double arrival_a, double arrival_b, double d, const DelaySpec& spec) {
  double t0 = std::max(arrival_a, arrival_b);
  if (spec.kind() == DelaySpec::Kind::Linear)
    return std::max(0.5 * (d + arrival_a + arrival_b), t0);

  auto total = [&](double t) {
    return spec.eval(t - arrival_a) + spec.eval(t - arrival_b);
  };
  if (total(t0) >= d) return t0;
  if (2.0 * spec.sup() < d)
    fail(Errc::Unreachable, "match time: delay function is bounded below the distance");

  double step = 1.0;
  double hi = t0 + step;
  int doublings = 0;
  while (total(hi) < d) {
    step *= 2.0;
    hi = t0 + step;
    if (++doublings > 200) fail(Errc::Unreachable, "match time: bracket expansion failed");
  }
  double lo = std::max(t0, hi - step);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    (total(mid) >= d ? hi : lo) = mid;
  }
  return hi;
}

namespace {

struct Event {
  double t;
  int kind;  // 0 = arrival (a = request id), 1 = candidate match of (a, b)
  int a;
  int b;
  bool operator>(const Event& o) const {
    return std::tie(t, kind, a, b) > std::tie(o.t, o.kind, o.a, o.b);
  }
};

}  // namespace

Solution run_greedy(const MetricSpace& metric, const RequestSequence& seq, const DelaySpec& spec) {
  const int m = seq.size();
  if (m % 2 != 0) fail(Errc::OddSequence, "greedy: sequence length must be even");

  // A pair's match time depends only on the two arrivals, so each co-pending
  // pair contributes exactly one candidate event; stale candidates (an
  // endpoint already matched) are skipped on pop.
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  for (int i = 0; i < m; ++i) events.push(Event{seq[i].arrival, 0, i, -1});

  std::vector<char> matched(m, 0);
  std::vector<int> pending;
  pending.reserve(m);
  Solution sol;
  sol.pairs.reserve(m / 2);

  while (!events.empty()) {
    Event ev = events.top();
    events.pop();
    if (ev.kind == 0) {
      const Request& r = seq[ev.a];
      for (int p : pending) {
        if (matched[p]) continue;
        double t = pair_match_time(seq[p].arrival, r.arrival,
                                   metric.d(seq[p].location, r.location), spec);
        events.push(Event{t, 1, std::min(p, ev.a), std::max(p, ev.a)});
      }
      pending.push_back(ev.a);
    } else {
      if (matched[ev.a] || matched[ev.b]) continue;
      matched[ev.a] = matched[ev.b] = 1;
      sol.pairs.push_back(MatchedPair{ev.a, ev.b, ev.t});
      std::erase_if(pending, [&](int p) { return matched[p]; });
    }
  }
  sol.breakdown = solution_cost(sol, seq, metric, spec);
  return sol;
}

}  // namespace mpmd
