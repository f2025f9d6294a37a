#pragma once

#include <cstdint>
#include <vector>

namespace mpmd {

// Two-color queue experiment: red/blue arrivals share one location (cross
// distance 0), same-color pairs are forbidden, and greedy matches any
// red-blue pair instantly. The pending count after the i-th arrival is the
// translation distance of a lazy coin-flip walk; the total cost is its
// time-weighted sum.
struct BipartiteRun {
  std::vector<int> pending;  // P_i after each arrival, size m
  double total_cost = 0.0;   // sum over i < m of P_i * (t_{i+1} - t_i)
};

// colors[i] in {0, 1}; gaps[i] = t_{i+1} - t_i (size m - 1).
BipartiteRun run_bipartite_greedy_fixed(const std::vector<int>& colors,
                                        const std::vector<double>& gaps);

// Poisson arrivals with rates (rate_a, rate_b); the scaling experiments use
// 1/2 and 1/2.
BipartiteRun run_bipartite_greedy(double rate_a, double rate_b, int m, uint64_t seed);

}  // namespace mpmd
