#include "mpmd/arrivals.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <queue>
#include <vector>

#include "mpmd/errors.hpp"
#include "mpmd/rng.hpp"

namespace mpmd {

namespace {

// Stream tags under the master seed: 0 for the centralized draw stream,
// 1 + x for point x's renewal stream in the distributed model.
constexpr uint64_t kCentralizedStream = 0;

void check_config(const MetricSpace& metric, const GenConfig& cfg) {
  if (metric.n() < 1) fail(Errc::BadConfig, "gen: empty metric");
  if (cfg.m < 0) fail(Errc::BadConfig, "gen: negative m");
  if (!cfg.allow_odd && (cfg.m < 2 || cfg.m % 2 != 0))
    fail(Errc::OddSequence, "gen: m must be even and >= 2");
}

// Ties have probability zero; a float collision is perturbed by one ulp.
double enforce_increasing(double t, double prev) {
  if (t > prev) return t;
  std::cerr << "gen: arrival-time collision at t=" << prev << ", perturbed by one ulp\n";
  return std::nextafter(prev, std::numeric_limits<double>::infinity());
}

}  // namespace

RequestSequence gen_centralized(const MetricSpace& metric, const GenConfig& cfg) {
  check_config(metric, cfg);
  Rng rng(derive_seed(cfg.seed, kCentralizedStream));
  const double lambda = metric.total_rate();
  const int n = metric.n();

  RequestSequence seq;
  seq.requests.reserve(cfg.m);
  double t = 0.0;
  for (int i = 0; i < cfg.m; ++i) {
    double next = t + rng.next_exponential(lambda);
    t = i == 0 ? next : enforce_increasing(next, t);
    double u = rng.next_unit() * lambda;
    int loc = n - 1;
    double cum = 0.0;
    for (int x = 0; x < n; ++x) {
      cum += metric.rate(x);
      if (cum >= u) {
        loc = x;
        break;
      }
    }
    seq.requests.push_back(Request{i, loc, t});
  }
  return seq;
}

RequestSequence gen_distributed(const MetricSpace& metric, const GenConfig& cfg) {
  check_config(metric, cfg);
  const int n = metric.n();
  std::vector<Rng> streams;
  streams.reserve(n);
  for (int x = 0; x < n; ++x)
    streams.emplace_back(derive_seed(cfg.seed, 1 + static_cast<uint64_t>(x)));

  using Event = std::pair<double, int>;  // (next arrival, point)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> heap;
  for (int x = 0; x < n; ++x) heap.emplace(streams[x].next_exponential(metric.rate(x)), x);

  RequestSequence seq;
  seq.requests.reserve(cfg.m);
  double prev = 0.0;
  for (int i = 0; i < cfg.m; ++i) {
    auto [t, x] = heap.top();
    heap.pop();
    heap.emplace(t + streams[x].next_exponential(metric.rate(x)), x);
    double stamped = i == 0 ? t : enforce_increasing(t, prev);
    prev = stamped;
    seq.requests.push_back(Request{i, x, stamped});
  }
  return seq;
}

RequestSequence generate(const MetricSpace& metric, const GenConfig& cfg) {
  return cfg.model == ArrivalModel::Centralized ? gen_centralized(metric, cfg)
                                                : gen_distributed(metric, cfg);
}

}  // namespace mpmd
