#pragma once

#include <string>
#include <vector>

namespace mpmd {

// Finite metric space with a per-point Poisson arrival rate. Immutable after
// construction; share freely across threads.
struct MetricSpace {
  std::vector<std::string> labels;
  std::vector<double> dist;   // row-major n*n, symmetric, zero diagonal
  std::vector<double> rates;  // lambda_x > 0

  int n() const { return static_cast<int>(rates.size()); }
  double d(int i, int j) const { return dist[static_cast<size_t>(i) * rates.size() + j]; }
  double rate(int i) const { return rates[i]; }
  double total_rate() const;
  double d_max() const;
};

// Builds a MetricSpace after checking shape, symmetry, zero diagonal,
// finiteness, positive rates and the triangle inequality (1e-9 absolute).
MetricSpace validate_metric(const std::vector<std::vector<double>>& dist,
                            const std::vector<double>& rates,
                            std::vector<std::string> labels = {});

// Distances scaled by c, rates by 1/c: arrival times and all costs under a
// linear delay scale by exactly c.
MetricSpace rescale_metric(const MetricSpace& m, double c);

}  // namespace mpmd
