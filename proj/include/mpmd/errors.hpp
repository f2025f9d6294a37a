#pragma once

#include <stdexcept>
#include <string>

namespace mpmd {

enum class Errc {
  AsymmetricDistance,
  TriangleViolation,
  NonPositiveRate,
  NonFiniteDistance,
  BadShape,
  NegativeDuration,
  BadDelaySpec,
  OddSequence,
  UnsortedSequence,
  BadLocation,
  UncoveredRequest,
  DoubleCoveredRequest,
  BadMatchTime,
  NonPositivePenalty,
  Unreachable,
  DivergentIntegral,
  TooLarge,
  Infeasible,
  BoundViolation,
  InsufficientRange,
  BadConfig,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace mpmd
