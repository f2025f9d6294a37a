#pragma once

#include <optional>
#include <vector>

#include "mpmd/delay.hpp"
#include "mpmd/metric.hpp"
#include "mpmd/request.hpp"

namespace mpmd {

struct MatchedPair {
  int a = 0;
  int b = 0;
  double time = 0.0;  // s(r), >= both arrivals
};

struct ClearedRequest {
  int id = 0;
  double time = 0.0;
};

struct CostBreakdown {
  double connection = 0.0;
  double delay = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

struct Solution {
  std::vector<MatchedPair> pairs;
  std::vector<ClearedRequest> cleared;  // empty except for penalty runs
  CostBreakdown breakdown;
};

// Recomputes the breakdown from scratch: connection = sum of pair distances,
// delay = sum of f(s - t) over matched requests, penalty = p * |cleared|.
// Cleared requests carry no delay term (they are cleared on arrival; the one
// end-of-sequence clear is timestamped but still penalty-only).
// Verifies that every request is covered exactly once and that match times
// respect arrivals.
CostBreakdown solution_cost(const Solution& sol, const RequestSequence& seq,
                            const MetricSpace& metric, const DelaySpec& spec,
                            std::optional<double> penalty = std::nullopt);

}  // namespace mpmd
