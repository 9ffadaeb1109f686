#pragma once

#include <cstdint>

#include "isac/types.hpp"

namespace isac {

/// Counter-based generator: draw n of stream s under seed k is
/// mix(key(k, s) + (n + 1) * 0x9E3779B97F4A7C15), mix being the SplitMix64
/// finalizer and key(k, s) = mix(k) ^ mix(s + 0xD1B54A32D192ED03). Streams are
/// independent, so instance i of a corpus uses stream i and nothing else.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on (0, 1].
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal (Box-Muller, both outputs used).
  double normal();
  // Circularly-symmetric complex Gaussian with unit variance.
  Complex complex_normal();

  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace isac
