#include "mpmd/solution.hpp"

#include <cmath>
#include <string>

#include "mpmd/errors.hpp"

namespace mpmd {

namespace {
constexpr double kTimeTol = 1e-9;
}

void check_sequence(const RequestSequence& seq, const MetricSpace& metric) {
  double prev = -1.0;
  for (int i = 0; i < seq.size(); ++i) {
    const Request& r = seq[i];
    if (r.id != i) fail(Errc::BadShape, "sequence: ids must be 0..m-1 in order");
    if (r.location < 0 || r.location >= metric.n())
      fail(Errc::BadLocation, "sequence: request " + std::to_string(i) + " has invalid location");
    if (r.arrival < 0.0) fail(Errc::UnsortedSequence, "sequence: negative arrival time");
    if (r.arrival <= prev)
      fail(Errc::UnsortedSequence, "sequence: arrival times must strictly increase");
    prev = r.arrival;
  }
}

CostBreakdown solution_cost(const Solution& sol, const RequestSequence& seq,
                            const MetricSpace& metric, const DelaySpec& spec,
                            std::optional<double> penalty) {
  const int m = seq.size();
  std::vector<int> covered(m, 0);
  auto cover = [&](int id) {
    if (id < 0 || id >= m) fail(Errc::UncoveredRequest, "solution: unknown request id");
    if (covered[id]++) fail(Errc::DoubleCoveredRequest,
                            "solution: request " + std::to_string(id) + " covered twice");
  };

  CostBreakdown out;
  for (const MatchedPair& p : sol.pairs) {
    cover(p.a);
    cover(p.b);
    const Request& a = seq[p.a];
    const Request& b = seq[p.b];
    if (p.time < std::max(a.arrival, b.arrival) - kTimeTol)
      fail(Errc::BadMatchTime, "solution: pair matched before arrival");
    out.connection += metric.d(a.location, b.location);
    out.delay += spec.eval(std::max(0.0, p.time - a.arrival));
    out.delay += spec.eval(std::max(0.0, p.time - b.arrival));
  }
  for (const ClearedRequest& c : sol.cleared) {
    cover(c.id);
    if (c.time < seq[c.id].arrival - kTimeTol)
      fail(Errc::BadMatchTime, "solution: cleared before arrival");
    if (!penalty) fail(Errc::NonPositivePenalty, "solution: cleared requests need a penalty");
  }
  for (int i = 0; i < m; ++i)
    if (!covered[i]) fail(Errc::UncoveredRequest, "solution: request " + std::to_string(i) + " uncovered");

  if (penalty) out.penalty = *penalty * static_cast<double>(sol.cleared.size());
  out.total = out.connection + out.delay + out.penalty;
  return out;
}

}  // namespace mpmd
