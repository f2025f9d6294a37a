#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mpmd/delay.hpp"
#include "mpmd/metric.hpp"
#include "mpmd/radius.hpp"
#include "mpmd/request.hpp"
#include "mpmd/rng.hpp"
#include "mpmd/solution.hpp"

namespace mpmd::testing {

// Random metric: symmetric uniform entries closed under shortest paths, so
// the triangle inequality holds exactly. Rates are log-uniform.
inline MetricSpace random_metric(int n, uint64_t seed, double rate_lo = 0.01,
                                 double rate_hi = 100.0) {
  Rng rng(seed);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rng.next_uniform(0.1, 2.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<double> rates(n);
  double llo = std::log(rate_lo), lhi = std::log(rate_hi);
  for (double& r : rates) r = std::exp(rng.next_uniform(llo, lhi));
  return validate_metric(d, rates);
}

// The Figure-style four-point metric: distances from x are 1, 2, 4; the
// remaining pairwise distances complete the metric by summing through x.
inline MetricSpace star_metric(const std::vector<double>& rates) {
  std::vector<double> arm = {0.0, 1.0, 2.0, 4.0};
  std::vector<std::vector<double>> d(4, std::vector<double>(4, 0.0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = i == j ? 0.0 : arm[i] + arm[j];
  return validate_metric(d, rates);
}

inline RequestSequence make_sequence(const std::vector<std::pair<int, double>>& reqs) {
  RequestSequence seq;
  int id = 0;
  for (auto [loc, t] : reqs) seq.requests.push_back(Request{id++, loc, t});
  return seq;
}

// Brute-force greedy simulator on a fixed time grid: at every step, matches
// the satisfying pair with the smallest (id, id) key. Independent of the
// event-driven implementation.
inline Solution greedy_time_stepped(const MetricSpace& metric, const RequestSequence& seq,
                                    const DelaySpec& spec, double dt) {
  const int m = seq.size();
  std::vector<char> matched(m, 0);
  Solution sol;
  double t_max = seq.last_arrival() + 2.0 * metric.d_max() + 10.0;
  long steps = static_cast<long>(t_max / dt) + 2;
  for (long s = 0; s <= steps && static_cast<int>(sol.pairs.size()) < m / 2; ++s) {
    double t = static_cast<double>(s) * dt;
    bool again = true;
    while (again) {
      again = false;
      for (int i = 0; i < m && !again; ++i) {
        if (matched[i] || seq[i].arrival > t) continue;
        for (int j = i + 1; j < m && !again; ++j) {
          if (matched[j] || seq[j].arrival > t) continue;
          double need = metric.d(seq[i].location, seq[j].location);
          if (spec.eval(t - seq[i].arrival) + spec.eval(t - seq[j].arrival) >= need) {
            matched[i] = matched[j] = 1;
            sol.pairs.push_back(MatchedPair{i, j, t});
            again = true;
          }
        }
      }
    }
  }
  sol.breakdown = solution_cost(sol, seq, metric, spec);
  return sol;
}

// Verbatim restatement of the clearing algorithm's arrival rules, written
// directly from the rule text with plain linear scans. Independent of
// run_mpmdfp.
inline Solution mpmdfp_oracle(const MetricSpace& metric, const RequestSequence& seq,
                              const RadiusTable& rtab, double p) {
  const int m = seq.size();
  std::vector<int> pending;
  Solution sol;
  for (int i = 0; i < m; ++i) {
    int x = seq[i].location;
    if (rtab.rho[x] >= p) {
      int pick = -1;
      for (int q : pending) {
        int y = seq[q].location;
        if (metric.d(x, y) <= rtab.rho[y]) {
          pick = q;
          break;
        }
      }
      if (pick >= 0) {
        sol.pairs.push_back(MatchedPair{pick, i, seq[i].arrival});
        std::erase(pending, pick);
      } else {
        sol.cleared.push_back(ClearedRequest{i, seq[i].arrival});
      }
      continue;
    }
    int pick = -1;
    for (int q : pending) {
      int y = seq[q].location;
      if (metric.d(x, y) <= rtab.rho[y]) {
        pick = q;
        break;
      }
    }
    if (pick < 0) {
      double best_d = std::numeric_limits<double>::infinity();
      for (int q : pending) {
        int y = seq[q].location;
        double d = metric.d(x, y);
        if (d <= rtab.rho[y] + rtab.rho[x] && d < best_d) {
          best_d = d;
          pick = q;
        }
      }
    }
    if (pick >= 0) {
      sol.pairs.push_back(MatchedPair{pick, i, seq[i].arrival});
      std::erase(pending, pick);
    } else {
      pending.push_back(i);
    }
  }
  double t_end = seq.last_arrival();
  if (pending.size() % 2 != 0) {
    sol.cleared.push_back(ClearedRequest{pending.back(), t_end});
    pending.pop_back();
  }
  for (size_t k = 0; k + 1 < pending.size(); k += 2)
    sol.pairs.push_back(MatchedPair{pending[k], pending[k + 1], t_end});
  sol.breakdown = solution_cost(sol, seq, metric, rtab.spec, p);
  return sol;
}

}  // namespace mpmd::testing
