#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace mpmd {

// Pairwise summation in fixed order: deterministic regardless of how many
// workers produced the values.
double pairwise_sum(std::span<const double> xs);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double sample_covariance(std::span<const double> xs, std::span<const double> ys);

// Standard normal quantile (Acklam's rational approximation, |err| < 1.2e-8).
double normal_quantile(double p);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

LineFit least_squares(std::span<const double> xs, std::span<const double> ys);

}  // namespace mpmd
