#pragma once

#include "mpmd/delay.hpp"
#include "mpmd/metric.hpp"
#include "mpmd/request.hpp"
#include "mpmd/solution.hpp"

namespace mpmd {

// Earliest t >= max(arrival_a, arrival_b) with
//   f(t - arrival_a) + f(t - arrival_b) >= d.
// Linear has the closed form max((d + t_a + t_b) / 2, max(t_a, t_b)); the
// general case brackets by doubling and bisects to 1e-12 absolute time.
// Throws Unreachable when f is bounded and d exceeds 2 * sup f.
double pair_match_time(double arrival_a, double arrival_b, double d, const DelaySpec& spec);

// Matches any two pending requests the moment the sum of their delay costs
// reaches their distance. Event-driven: each co-pending pair contributes one
// candidate match event, computed once since it depends only on arrivals.
// Simultaneous matches break ties by (time, smaller id, larger id).
Solution run_greedy(const MetricSpace& metric, const RequestSequence& seq, const DelaySpec& spec);

}  // namespace mpmd
