#pragma once

#include <vector>

#include "mpmd/metric.hpp"

namespace mpmd {

struct Request {
  int id = 0;
  int location = 0;
  double arrival = 0.0;
};

// Requests sorted by strictly increasing arrival time.
struct RequestSequence {
  std::vector<Request> requests;

  int size() const { return static_cast<int>(requests.size()); }
  bool empty() const { return requests.empty(); }
  const Request& operator[](int i) const { return requests[i]; }
  double last_arrival() const { return requests.empty() ? 0.0 : requests.back().arrival; }
};

// Enforces ids 0..m-1 in order, valid locations, arrival >= 0 and strict
// temporal order.
void check_sequence(const RequestSequence& seq, const MetricSpace& metric);

}  // namespace mpmd
