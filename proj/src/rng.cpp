#include "fmopt/rng.hpp"

#include <limits>

#include "fmopt/errors.hpp"

namespace fmopt {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Seed derive_seed(Seed parent, std::string_view tag, std::uint64_t index) {
  std::uint64_t h = splitmix64(parent);
  for (unsigned char c : tag) {
    h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  }
  return splitmix64(h ^ index);
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorKind::InvalidArgument, "uniform_below: bound must be positive");
  }
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  // 2^64 mod bound, computed without overflowing.
  const std::uint64_t rem = (kMax % bound + 1) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (rem == 0 || r <= kMax - rem) {
      return r % bound;
    }
  }
}

}  // namespace fmopt
