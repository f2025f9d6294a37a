#include "mpmd/radius_run.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mpmd/errors.hpp"

namespace mpmd {

namespace {

void check_run(const MetricSpace& metric, const RequestSequence& seq, const RadiusTable& rtab) {
  if (seq.size() % 2 != 0) fail(Errc::OddSequence, "radius run: sequence length must be even");
  if (static_cast<int>(rtab.rho.size()) != metric.n())
    fail(Errc::BadConfig, "radius run: radius table does not match the metric");
}

// Branch (1): the unique pending request whose closed ball contains x.
// Uniqueness follows from the pairwise-separation invariant of the pending
// set; it is verified here on every arrival rather than assumed.
int ball_owner(const std::vector<int>& pending, const MetricSpace& metric,
               const RadiusTable& rtab, const RequestSequence& seq, int x) {
  int owner = -1;
  for (int p : pending) {
    int y = seq[p].location;
    if (metric.d(x, y) <= rtab.rho[y]) {
      if (owner >= 0)
        throw std::logic_error("radius run: two pending balls cover one arrival");
      owner = p;
    }
  }
  return owner;
}

// Branch (2): cheapest connection first, then earliest arrival.
int reach_partner(const std::vector<int>& pending, const MetricSpace& metric,
                  const RadiusTable& rtab, const RequestSequence& seq, int x, double rho_x) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int p : pending) {
    int y = seq[p].location;
    double d = metric.d(x, y);
    if (d <= rtab.rho[y] + rho_x && d < best_d) {
      best = p;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

Solution run_radius(const MetricSpace& metric, const RequestSequence& seq,
                    const RadiusTable& rtab) {
  check_run(metric, seq, rtab);
  std::vector<int> pending;
  Solution sol;
  sol.pairs.reserve(seq.size() / 2);

  for (int i = 0; i < seq.size(); ++i) {
    const Request& r = seq[i];
    int partner = ball_owner(pending, metric, rtab, seq, r.location);
    if (partner < 0)
      partner = reach_partner(pending, metric, rtab, seq, r.location, rtab.rho[r.location]);
    if (partner >= 0) {
      sol.pairs.push_back(MatchedPair{partner, i, r.arrival});
      std::erase(pending, partner);
    } else {
      pending.push_back(i);
    }
  }
  // Late pairs: leftovers in arrival order, all at the last arrival time.
  double t_end = seq.last_arrival();
  for (size_t k = 0; k + 1 < pending.size(); k += 2)
    sol.pairs.push_back(MatchedPair{pending[k], pending[k + 1], t_end});

  sol.breakdown = solution_cost(sol, seq, metric, rtab.spec);
  return sol;
}

Solution run_mpmdfp(const MetricSpace& metric, const RequestSequence& seq, const RadiusTable& rtab,
                    double penalty) {
  if (!(penalty > 0.0)) fail(Errc::NonPositivePenalty, "mpmdfp: penalty must be > 0");
  check_run(metric, seq, rtab);

  // cheap = {x : rho_x < p}; expensive arrivals never enter the pending set.
  auto cheap = [&](int x) { return rtab.rho[x] < penalty; };

  std::vector<int> pending;
  Solution sol;

  for (int i = 0; i < seq.size(); ++i) {
    const Request& r = seq[i];
    if (!cheap(r.location)) {
      int owner = ball_owner(pending, metric, rtab, seq, r.location);
      if (owner >= 0) {
        sol.pairs.push_back(MatchedPair{owner, i, r.arrival});
        std::erase(pending, owner);
      } else {
        sol.cleared.push_back(ClearedRequest{i, r.arrival});
      }
      continue;
    }
    int partner = ball_owner(pending, metric, rtab, seq, r.location);
    if (partner < 0)
      partner = reach_partner(pending, metric, rtab, seq, r.location, rtab.rho[r.location]);
    if (partner >= 0) {
      sol.pairs.push_back(MatchedPair{partner, i, r.arrival});
      std::erase(pending, partner);
    } else {
      pending.push_back(i);
    }
  }

  double t_end = seq.last_arrival();
  if (pending.size() % 2 != 0) {
    // Odd leftover: clear the most recently arrived pending request.
    sol.cleared.push_back(ClearedRequest{pending.back(), t_end});
    pending.pop_back();
  }
  for (size_t k = 0; k + 1 < pending.size(); k += 2)
    sol.pairs.push_back(MatchedPair{pending[k], pending[k + 1], t_end});

  sol.breakdown = solution_cost(sol, seq, metric, rtab.spec, penalty);
  return sol;
}

}  // namespace mpmd
