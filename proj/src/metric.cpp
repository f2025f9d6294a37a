#include "mpmd/metric.hpp"

#include <cmath>
#include <string>

#include "mpmd/errors.hpp"

namespace mpmd {

namespace {
constexpr double kTol = 1e-9;
}

double MetricSpace::total_rate() const {
  double sum = 0.0;
  for (double r : rates) sum += r;
  return sum;
}

double MetricSpace::d_max() const {
  double best = 0.0;
  for (double v : dist) best = std::max(best, v);
  return best;
}

MetricSpace validate_metric(const std::vector<std::vector<double>>& dist,
                            const std::vector<double>& rates, std::vector<std::string> labels) {
  const size_t n = rates.size();
  if (n == 0) fail(Errc::BadShape, "metric: empty point set");
  if (dist.size() != n) fail(Errc::BadShape, "metric: distance table is not n x n");
  for (const auto& row : dist)
    if (row.size() != n) fail(Errc::BadShape, "metric: ragged distance table");
  if (!labels.empty() && labels.size() != n)
    fail(Errc::BadShape, "metric: labels length mismatch");

  for (size_t i = 0; i < n; ++i) {
    if (!(rates[i] > 0.0) || !std::isfinite(rates[i]))
      fail(Errc::NonPositiveRate, "metric: rate of point " + std::to_string(i) + " must be > 0");
  }
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(dist[i][i]) > kTol)
      fail(Errc::AsymmetricDistance, "metric: nonzero diagonal at " + std::to_string(i));
    for (size_t j = 0; j < n; ++j) {
      if (!std::isfinite(dist[i][j]) || dist[i][j] < 0.0)
        fail(Errc::NonFiniteDistance, "metric: entry (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") must be finite and >= 0");
      if (std::abs(dist[i][j] - dist[j][i]) > kTol)
        fail(Errc::AsymmetricDistance,
             "metric: d(" + std::to_string(i) + "," + std::to_string(j) + ") != transpose");
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (dist[i][k] > dist[i][j] + dist[j][k] + kTol)
          fail(Errc::TriangleViolation, "metric: triangle violation at (" + std::to_string(i) +
                                            "," + std::to_string(j) + "," + std::to_string(k) +
                                            ")");

  MetricSpace m;
  m.rates = rates;
  m.dist.resize(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m.dist[i * n + j] = i == j ? 0.0 : dist[i][j];
  if (labels.empty()) {
    m.labels.reserve(n);
    for (size_t i = 0; i < n; ++i) m.labels.push_back("p" + std::to_string(i));
  } else {
    m.labels = std::move(labels);
  }
  return m;
}

MetricSpace rescale_metric(const MetricSpace& m, double c) {
  if (!(c > 0.0)) fail(Errc::BadConfig, "rescale: factor must be > 0");
  MetricSpace out = m;
  for (double& v : out.dist) v *= c;
  for (double& r : out.rates) r /= c;
  return out;
}

}  // namespace mpmd
