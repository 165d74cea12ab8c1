#include "fmopt/dataset.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <string>

#include "fmopt/errors.hpp"
#include "fmopt/format.hpp"

namespace fmopt {

DatasetPolicy DatasetPolicy::fifo(std::size_t d_latest) {
  if (d_latest < 1) {
    throw Error(ErrorKind::InvalidArgument, "fifo policy requires d_latest >= 1");
  }
  return {PolicyKind::Fifo, d_latest};
}

std::span<const DataPoint> Dataset::initial_training_view() const {
  if (batches_added_ > 0) {
    throw Error(ErrorKind::Sequencing,
                "initial_training_view: only valid before the first add_batch");
  }
  return {entries_.data(), entries_.size()};
}

void Dataset::add_initial(const BinaryVector& x, double y) {
  if (batches_added_ > 0) {
    throw Error(ErrorKind::Sequencing, "add_initial: batches already added");
  }
  entries_.push_back(DataPoint{x, y, next_birth_++});
}

void Dataset::add_batch(std::span<const std::pair<BinaryVector, double>> batch) {
  if (batch.empty()) {
    throw Error(ErrorKind::InvalidArgument, "add_batch: batch must be nonempty");
  }
  for (const auto& [x, y] : batch) {
    entries_.push_back(DataPoint{x, y, next_birth_++});
  }
  ++batches_added_;
  if (policy_.kind == PolicyKind::Fifo && entries_.size() > policy_.d_latest) {
    const std::size_t excess = entries_.size() - policy_.d_latest;
    entries_.erase(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(excess));
  }
}

void Dataset::dump(std::ostream& out) const {
  for (const auto& point : entries_) {
    out << point.birth_index << ", " << format_double(point.y) << ", " << point.x.to_string()
        << "\n";
  }
}

Dataset generate_initial(std::size_t n, std::size_t d_init, const BlackBox& bb, Rng& rng,
                         DatasetPolicy policy) {
  if (d_init < 1) {
    throw Error(ErrorKind::InvalidArgument, "generate_initial: d_init must be >= 1");
  }
  if (n < 64 && d_init > (std::uint64_t{1} << n)) {
    throw Error(ErrorKind::InfeasibleUniqueness,
                "generate_initial: d_init = " + std::to_string(d_init) +
                    " exceeds the 2^" + std::to_string(n) + " distinct vectors");
  }
  Dataset ds(policy);
  std::set<std::vector<std::uint8_t>> seen;
  while (seen.size() < d_init) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
      bits[i] = rng.coin_flip() ? 1 : 0;
    }
    if (!seen.insert(bits).second) continue;  // duplicate, draw again
    BinaryVector x(std::move(bits));
    const double y = bb(x);
    ds.add_initial(x, y);
  }
  return ds;
}

SelectionResult select_lowest(const SampleSet& samples, std::size_t d_adds, const BlackBox& bb) {
  if (d_adds > samples.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "select_lowest: d_adds = " + std::to_string(d_adds) +
                    " exceeds the " + std::to_string(samples.size()) + " reads");
  }
  SelectionResult result;
  // Reads are sorted by sampler energy, so first occurrence per vector
  // carries its lowest energy.
  std::set<std::vector<std::uint8_t>> seen;
  for (const auto& read : samples.reads) {
    if (!seen.insert(read.x.bits()).second) continue;
    result.evaluated.emplace_back(read.x, bb(read.x));
  }
  result.bb_calls = result.evaluated.size();
  std::stable_sort(result.evaluated.begin(), result.evaluated.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  const std::size_t take = std::min(d_adds, result.evaluated.size());
  result.chosen.assign(result.evaluated.begin(),
                       result.evaluated.begin() + static_cast<std::ptrdiff_t>(take));
  result.short_batch = result.evaluated.size() < d_adds;
  return result;
}

}  // namespace fmopt
