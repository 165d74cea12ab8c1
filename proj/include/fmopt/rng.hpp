#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fmopt {

using Seed = std::uint64_t;

/// Child-stream derivation: splitmix64 mixing of (parent, tag bytes, index).
/// Every stream used by a run is derived this way from the run seed, so a
/// (seed, tag, index) triple identifies the stream on any machine.
Seed derive_seed(Seed parent, std::string_view tag, std::uint64_t index = 0);

/// Seedable uniform generator. The raw engine is std::mt19937_64 (fully
/// specified by the standard); the uniform mappings below are implemented
/// here instead of <random> distributions so that streams are identical
/// across standard libraries.
class Rng {
 public:
  static constexpr std::string_view kIdentity = "mt19937_64";

  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
  }

  /// Uniform integer on [0, bound); unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// A single fair bit.
  bool coin_flip() { return (next_u64() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fmopt
