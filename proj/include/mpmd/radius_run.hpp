#pragma once

#include "mpmd/metric.hpp"
#include "mpmd/radius.hpp"
#include "mpmd/request.hpp"
#include "mpmd/solution.hpp"

namespace mpmd {

// Arrival-driven rule using precomputed radii. On arrival of r at x:
//   (1) if some pending r' has d(x, l(r')) <= rho_{l(r')}, match now
//       (at most one such r' can exist; this is asserted, not assumed);
//   (2) else if some pending r' has d <= rho_{l(r')} + rho_x, match now,
//       preferring the smallest d and then the earliest arrival;
//   (3) else r goes pending.
// After the last arrival the leftover pending requests are paired in arrival
// order, all at the last arrival time.
Solution run_radius(const MetricSpace& metric, const RequestSequence& seq, const RadiusTable& rtab);

// Penalty variant. Points split into cheap = {rho_x < p} and expensive
// = {rho_x >= p}. Expensive arrivals match a pending cheap request whose
// closed ball covers them, otherwise they are cleared on arrival for p.
// Cheap arrivals follow run_radius's rules against the pending (all cheap)
// set. Leftovers pair at the last arrival time; an odd leftover clears the
// most recently arrived pending request.
Solution run_mpmdfp(const MetricSpace& metric, const RequestSequence& seq, const RadiusTable& rtab,
                    double penalty);

}  // namespace mpmd
