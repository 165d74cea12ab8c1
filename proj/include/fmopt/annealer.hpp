#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fmopt/binary_vector.hpp"
#include "fmopt/fm_model.hpp"
#include "fmopt/rng.hpp"

namespace fmopt {

enum class AnnealSchedule { Linear };

struct AnnealConfig {
  double beta_initial = 1e-5;
  double beta_final = 100.0;
  AnnealSchedule schedule = AnnealSchedule::Linear;
  std::uint64_t outer_loops = 1000;
  std::uint64_t inner_loops = 10;
  std::uint64_t num_reads = 15;

  void validate() const;

  friend bool operator==(const AnnealConfig&, const AnnealConfig&) = default;
};

struct SampleRead {
  BinaryVector x;
  double energy = 0.0;
  std::uint64_t read_index = 0;
};

/// Reads sorted ascending by energy, ties by read index. Stored energies are
/// exact qubo_evaluate values of their vectors.
struct SampleSet {
  std::vector<SampleRead> reads;

  std::size_t size() const noexcept { return reads.size(); }
};

/// Energy change of flipping bit i of x, computed in O(N) from the flipped
/// bit's row/column.
double flip_delta(const Qubo& q, const std::vector<std::uint8_t>& x, std::size_t i);

/// One Metropolis single-flip read: uniform random start, then outer_loops
/// schedule steps with beta(t) = beta_initial + (beta_final - beta_initial)
/// * t / (T-1) (beta_initial when T = 1); at each beta, inner_loops sweeps
/// proposing every index in order. Returns the best state visited and its
/// exact energy.
std::pair<BinaryVector, double> anneal_read(const Qubo& q, const AnnealConfig& cfg, Rng& rng);

/// num_reads independent reads with per-read streams derived from
/// (seed, "read", read_index), merged into a sorted SampleSet.
SampleSet sample(const Qubo& q, const AnnealConfig& cfg, Seed seed);

inline constexpr std::size_t kQuboBruteForceMaxDimension = 24;

/// Exact minimizer over all 2^N assignments, N <= 24; ties broken
/// lexicographically with 0 before 1.
std::pair<BinaryVector, double> brute_force_qubo(const Qubo& q);

}  // namespace fmopt
