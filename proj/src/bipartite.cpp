#include "mpmd/bipartite.hpp"

#include <cstdlib>

#include "mpmd/errors.hpp"
#include "mpmd/rng.hpp"

namespace mpmd {

BipartiteRun run_bipartite_greedy_fixed(const std::vector<int>& colors,
                                        const std::vector<double>& gaps) {
  const int m = static_cast<int>(colors.size());
  if (gaps.size() + 1 != colors.size())
    fail(Errc::BadConfig, "bipartite: need m - 1 gaps for m colors");

  BipartiteRun run;
  run.pending.reserve(m);
  // Signed queue: positive = reds waiting, negative = blues. A cross-color
  // arrival matches instantly at distance 0 with zero delay for the newcomer.
  long queue = 0;
  for (int i = 0; i < m; ++i) {
    queue += colors[i] == 0 ? 1 : -1;
    int p = static_cast<int>(std::labs(queue));
    run.pending.push_back(p);
    if (i + 1 < m) run.total_cost += static_cast<double>(p) * gaps[i];
  }
  return run;
}

BipartiteRun run_bipartite_greedy(double rate_a, double rate_b, int m, uint64_t seed) {
  if (!(rate_a > 0.0) || !(rate_b > 0.0))
    fail(Errc::BadConfig, "bipartite: rates must be > 0");
  Rng rng(derive_seed(seed, 0));
  const double lambda = rate_a + rate_b;

  std::vector<int> colors(m);
  std::vector<double> gaps(m > 0 ? m - 1 : 0);
  for (int i = 0; i < m; ++i) {
    double gap = rng.next_exponential(lambda);
    if (i > 0) gaps[i - 1] = gap;
    colors[i] = rng.next_unit() * lambda <= rate_a ? 0 : 1;
  }
  return run_bipartite_greedy_fixed(colors, gaps);
}

}  // namespace mpmd
