#pragma once

#include <cstdint>

#include "mpmd/metric.hpp"
#include "mpmd/request.hpp"

namespace mpmd {

enum class ArrivalModel { Centralized, Distributed };

struct GenConfig {
  int m = 0;
  uint64_t seed = 0;
  ArrivalModel model = ArrivalModel::Centralized;
  bool allow_odd = false;  // bipartite demo passes odd m
};

// One global Exp(lambda(X)) clock; each arrival lands on x with probability
// lambda_x / lambda(X). Canonical generator for experiments.
RequestSequence gen_centralized(const MetricSpace& metric, const GenConfig& cfg);

// Independent Exp(lambda_x) renewal stream per point (sub-seed derived from
// the master seed), merged and truncated to the first m events. Exists to
// test that the two models agree.
RequestSequence gen_distributed(const MetricSpace& metric, const GenConfig& cfg);

RequestSequence generate(const MetricSpace& metric, const GenConfig& cfg);

}  // namespace mpmd
