#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "fmopt/annealer.hpp"
#include "fmopt/binary_vector.hpp"
#include "fmopt/rng.hpp"

namespace fmopt {

/// The black-box objective. Call counts are the budget being studied, so
/// callers wrap it with a counter where accounting matters.
using BlackBox = std::function<double(const BinaryVector&)>;

struct DataPoint {
  BinaryVector x;
  double y = 0.0;
  std::uint64_t birth_index = 0;

  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

enum class PolicyKind { Conventional, Fifo };

struct DatasetPolicy {
  PolicyKind kind = PolicyKind::Conventional;
  std::size_t d_latest = 0;  // meaningful for Fifo only

  static DatasetPolicy conventional() { return {PolicyKind::Conventional, 0}; }
  static DatasetPolicy fifo(std::size_t d_latest);

  friend bool operator==(const DatasetPolicy&, const DatasetPolicy&) = default;
};

/// Ordered training set. Conventional policy grows without bound; FIFO
/// evicts the oldest entries on every add_batch so at most d_latest remain.
/// The initial entries are kept intact until the first add_batch, whatever
/// the policy.
class Dataset {
 public:
  explicit Dataset(DatasetPolicy policy) : policy_(policy) {}

  const std::vector<DataPoint>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  DatasetPolicy policy() const noexcept { return policy_; }
  std::uint64_t batches_added() const noexcept { return batches_added_; }

  /// All initial entries, for round-0 training regardless of policy. Only
  /// valid before the first add_batch.
  std::span<const DataPoint> initial_training_view() const;

  void add_initial(const BinaryVector& x, double y);
  void add_batch(std::span<const std::pair<BinaryVector, double>> batch);

  /// One `birth_index, y, bitstring` record per line.
  void dump(std::ostream& out) const;

 private:
  std::vector<DataPoint> entries_;
  DatasetPolicy policy_;
  std::uint64_t next_birth_ = 0;
  std::uint64_t batches_added_ = 0;
};

/// d_init pairwise-distinct inputs drawn uniformly (rejection sampling on
/// duplicates), each evaluated once through the black box.
Dataset generate_initial(std::size_t n, std::size_t d_init, const BlackBox& bb, Rng& rng,
                         DatasetPolicy policy);

struct SelectionResult {
  /// The d_adds pairs with the lowest true objectives, ascending.
  std::vector<std::pair<BinaryVector, double>> chosen;
  /// Every deduplicated read with its true objective, ascending; the black
  /// box was called exactly once per element.
  std::vector<std::pair<BinaryVector, double>> evaluated;
  std::size_t bb_calls = 0;
  bool short_batch = false;  // fewer distinct reads than d_adds
};

/// Deduplicates the sample set by vector (keeping the lowest sampler
/// energy), calls the black box on every distinct read, sorts by true value
/// ascending and keeps the d_adds best.
SelectionResult select_lowest(const SampleSet& samples, std::size_t d_adds, const BlackBox& bb);

}  // namespace fmopt
