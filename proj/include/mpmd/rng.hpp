#pragma once

#include <cmath>
#include <cstdint>

namespace mpmd {

// SplitMix64 step. Every random draw in the project flows through this one
// generator so runs are reproducible bit-for-bit across platforms and thread
// counts.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream splitting: sub-seed `stream` of `master` via mix(master ^ mix(stream)).
// Used for per-trial and per-point streams; no state is shared between them.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  uint64_t s = stream;
  uint64_t mixed = splitmix64(s);
  uint64_t t = master ^ mixed;
  return splitmix64(t);
}

class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_); }

  // Uniform on (0, 1]; zero is excluded so -log(u) stays finite.
  double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
  }

  // Inverse-CDF exponential draw; deliberately no ziggurat so that sequences
  // are bit-stable across implementations.
  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

  // Integer in [0, n).
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

private:
  uint64_t state_;
};

}  // namespace mpmd
