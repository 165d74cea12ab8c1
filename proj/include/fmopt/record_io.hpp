#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "fmopt/config.hpp"
#include "fmopt/fma_driver.hpp"

namespace fmopt::harness {

/// Grouping metadata a sweep attaches to each record it writes.
struct SweepCellMeta {
  std::string axis;   // d_latest | k | d_init | n
  std::string value;  // axis value as text; "all" denotes the conventional policy
  Seed seed = 0;
  std::string role;   // "cell" or "baseline"

  friend bool operator==(const SweepCellMeta&, const SweepCellMeta&) = default;
};

/// One JSON object per trace row followed by a summary object; the schema is
/// documented in the README.
std::string record_to_jsonl(const RunRecord& record, const RunSetup& setup,
                            const std::optional<SweepCellMeta>& meta = std::nullopt);

void write_record_file(const std::filesystem::path& path, const RunRecord& record,
                       const RunSetup& setup,
                       const std::optional<SweepCellMeta>& meta = std::nullopt);

/// The summary fields stats aggregation needs.
struct StoredSummary {
  std::filesystem::path file;
  double best_objective = 0.0;
  std::optional<double> final_residual;
  std::uint64_t bb_calls_total = 0;
  Seed seed = 0;
  bool incomplete = false;
  std::optional<SweepCellMeta> meta;
};

StoredSummary read_record_summary(const std::filesystem::path& path);

}  // namespace fmopt::harness
