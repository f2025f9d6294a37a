#pragma once

#include <string>
#include <vector>

namespace mpmd {

// Delay cost function f: f(0) = 0, non-decreasing, non-negative.
//   Linear      f(t) = t
//   Power       f(t) = t^alpha, alpha > 0
//   Table       piecewise linear through given knots, starting at (0, 0),
//               extrapolated past the last knot with the final slope
class DelaySpec {
public:
  enum class Kind { Linear, Power, Table };

  DelaySpec() = default;
  static DelaySpec linear();
  static DelaySpec power(double alpha);
  static DelaySpec table(std::vector<double> knots, std::vector<double> values);

  // "linear" | "power:<alpha>" | table from explicit knots (CLI loads the
  // table file and calls table()).
  static DelaySpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  // Least t with f(t) >= y, or +inf if y exceeds sup f.
  double inverse(double y) const;

  // sup_t f(t); finite only for tables with a flat tail.
  double sup() const;

  std::string to_string() const;

private:
  Kind kind_ = Kind::Linear;
  double alpha_ = 1.0;
  std::vector<double> knots_, values_;
  double tail_slope_ = 1.0;
};

// f(t) with domain checking; rejects t < 0.
double eval_delay(const DelaySpec& spec, double t);

}  // namespace mpmd
