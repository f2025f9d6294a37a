#include "mpmd/delay.hpp"

#include <cmath>
#include <limits>

#include "mpmd/errors.hpp"

namespace mpmd {

DelaySpec DelaySpec::linear() {
  DelaySpec s;
  s.kind_ = Kind::Linear;
  return s;
}

DelaySpec DelaySpec::power(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    fail(Errc::BadDelaySpec, "delay: power exponent must be finite and > 0");
  if (alpha > 50.0) fail(Errc::BadDelaySpec, "delay: power exponent capped at 50");
  DelaySpec s;
  s.kind_ = Kind::Power;
  s.alpha_ = alpha;
  return s;
}

DelaySpec DelaySpec::table(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size() || knots.size() < 2)
    fail(Errc::BadDelaySpec, "delay: table needs >= 2 aligned knots");
  if (knots.front() != 0.0 || values.front() != 0.0)
    fail(Errc::BadDelaySpec, "delay: table must start at (0, 0)");
  for (size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) fail(Errc::BadDelaySpec, "delay: knots must strictly increase");
    if (values[i] < values[i - 1]) fail(Errc::BadDelaySpec, "delay: values must be non-decreasing");
    if (!std::isfinite(knots[i]) || !std::isfinite(values[i]))
      fail(Errc::BadDelaySpec, "delay: non-finite table entry");
  }
  DelaySpec s;
  s.kind_ = Kind::Table;
  size_t last = knots.size() - 1;
  s.tail_slope_ = (values[last] - values[last - 1]) / (knots[last] - knots[last - 1]);
  s.knots_ = std::move(knots);
  s.values_ = std::move(values);
  return s;
}

DelaySpec DelaySpec::parse(const std::string& text) {
  if (text == "linear") return linear();
  if (text.rfind("power:", 0) == 0) {
    try {
      return power(std::stod(text.substr(6)));
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(Errc::BadDelaySpec, "delay: cannot parse exponent in '" + text + "'");
    }
  }
  fail(Errc::BadDelaySpec, "delay: unknown spec '" + text + "'");
}

double DelaySpec::eval(double t) const {
  switch (kind_) {
    case Kind::Linear:
      return t;
    case Kind::Power:
      return std::pow(t, alpha_);
    case Kind::Table: {
      if (t >= knots_.back())
        return values_.back() + tail_slope_ * (t - knots_.back());
      size_t lo = 0, hi = knots_.size() - 1;
      while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        (knots_[mid] <= t ? lo : hi) = mid;
      }
      double frac = (t - knots_[lo]) / (knots_[lo + 1] - knots_[lo]);
      return values_[lo] + frac * (values_[lo + 1] - values_[lo]);
    }
  }
  return 0.0;
}

double DelaySpec::inverse(double y) const {
  if (y <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Linear:
      return y;
    case Kind::Power:
      return std::pow(y, 1.0 / alpha_);
    case Kind::Table: {
      if (y > values_.back()) {
        if (tail_slope_ <= 0.0) return std::numeric_limits<double>::infinity();
        return knots_.back() + (y - values_.back()) / tail_slope_;
      }
      size_t lo = 0, hi = values_.size() - 1;
      while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        (values_[mid] < y ? lo : hi) = mid;
      }
      // first t on the segment [lo, lo+1] reaching y; segment may be flat
      if (values_[hi] == values_[lo]) return knots_[lo];
      double frac = (y - values_[lo]) / (values_[hi] - values_[lo]);
      return knots_[lo] + frac * (knots_[hi] - knots_[lo]);
    }
  }
  return 0.0;
}

double DelaySpec::sup() const {
  if (kind_ == Kind::Table && tail_slope_ <= 0.0) return values_.back();
  return std::numeric_limits<double>::infinity();
}

std::string DelaySpec::to_string() const {
  switch (kind_) {
    case Kind::Linear:
      return "linear";
    case Kind::Power:
      return "power:" + std::to_string(alpha_);
    case Kind::Table:
      return "table[" + std::to_string(knots_.size()) + "]";
  }
  return "?";
}

double eval_delay(const DelaySpec& spec, double t) {
  if (t < 0.0) fail(Errc::NegativeDuration, "delay: negative duration");
  return spec.eval(t);
}

}  // namespace mpmd
