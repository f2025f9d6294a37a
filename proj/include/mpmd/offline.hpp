#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mpmd/delay.hpp"
#include "mpmd/metric.hpp"
#include "mpmd/request.hpp"
#include "mpmd/solution.hpp"

namespace mpmd {

// Dense matching instance over an even number of nodes. Edges start absent
// (forbidden); absent edges are never used by the solvers, so infeasibility is
// detected rather than masked by large weights.
struct MatchInstance {
  explicit MatchInstance(int n);

  int n = 0;
  std::vector<double> w;
  std::vector<uint8_t> present;

  void set(int i, int j, double weight);
  void forbid(int i, int j);
  double weight(int i, int j) const { return w[static_cast<size_t>(i) * n + j]; }
  bool edge(int i, int j) const { return present[static_cast<size_t>(i) * n + j] != 0; }
};

// Offline weight of pairing two requests: d + f(|dt|). Pairing at the later
// arrival is optimal since f(0) = 0.
double edge_weight(const Request& a, const Request& b, const MetricSpace& metric,
                   const DelaySpec& spec);

MatchInstance build_match_instance(const RequestSequence& seq, const MetricSpace& metric,
                                   const DelaySpec& spec);

struct MatchingResult {
  double weight = 0.0;
  std::vector<std::pair<int, int>> pairs;
};

// Exhaustive oracle: bitmask DP over all perfect pairings, O(2^n * n).
// Rejects n > 20.
MatchingResult solve_opt_dp(const MatchInstance& inst);

// Exact minimum-weight perfect matching via the primal-dual blossom method.
// Dual feasibility and complementary slackness are verified on every solve.
// exact_int switches to fixed-point integer weights (scaled by 1e9) for
// bit-exact regression runs.
MatchingResult solve_opt_blossom(const MatchInstance& inst, bool exact_int = false);

struct FpResult {
  double weight = 0.0;
  std::vector<std::pair<int, int>> pairs;  // matched request pairs
  std::vector<int> cleared;                // requests matched to their shadow
};

// Offline optimum with clearing: each request gets a shadow node at cost p,
// shadows of distinct requests pair up at cost 0, and a perfect matching on
// the 2m nodes decides who is cleared. p = +inf disables clearing.
FpResult solve_opt_fp(const RequestSequence& seq, const MetricSpace& metric, const DelaySpec& spec,
                      double p, bool exact_int = false);

// c(sigma, r): cheapest way to serve r against any other request, optionally
// capped by the clearing penalty.
double min_total_cost(const RequestSequence& seq, int r, const MetricSpace& metric,
                      const DelaySpec& spec, std::optional<double> p = std::nullopt);

// (1/2) sum over r of min_total_cost: a lower bound on the offline optimum.
double opt_half_sum_bound(const RequestSequence& seq, const MetricSpace& metric,
                          const DelaySpec& spec, std::optional<double> p = std::nullopt);

// Offline solutions pair at the later arrival so solution_cost reproduces
// the matching weight exactly.
Solution to_solution(const MatchingResult& result, const RequestSequence& seq);
Solution to_solution(const FpResult& result, const RequestSequence& seq);

}  // namespace mpmd
