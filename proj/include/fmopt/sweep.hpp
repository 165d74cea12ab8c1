#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fmopt/config.hpp"
#include "fmopt/record_io.hpp"

namespace fmopt::harness {

enum class SweepAxis { DLatest, K, DInit, N };

const char* axis_name(SweepAxis axis);
SweepAxis axis_from_string(std::string_view text);

/// A sweep spec file is a config file with four extra keys: axis, values
/// (comma list; `all` allowed on the d_latest axis), seeds (comma list) and
/// output_dir.
struct SweepSpec {
  RunSetup base;
  SweepAxis axis = SweepAxis::DLatest;
  std::vector<std::string> values;
  std::vector<Seed> seeds;
  std::filesystem::path output_dir;

  void validate() const;
};

SweepSpec parse_sweep_file(const std::filesystem::path& path);

struct AggregateRow {
  std::string axis_value;
  std::size_t cells = 0;
  double mean_residual = 0.0;
  double std_residual = 0.0;  // population standard deviation
  double mean_improvement_rate = 0.0;
};

struct AggregateStats {
  std::string axis;
  std::vector<AggregateRow> rows;
  std::size_t failed_cells = 0;
};

/// Aggregation underlying both the sweep output and `stats`: summaries are
/// canonically ordered, incomplete runs are dropped (counted), residual
/// mean/std are taken per axis value, and the matched-seed improvement rate
/// is computed against the conventional baseline (the `all` cell on the
/// d_latest axis, the baseline twin otherwise).
AggregateStats aggregate_summaries(std::vector<StoredSummary> summaries);

std::string render_stats_csv(const AggregateStats& stats);

struct SweepResult {
  std::filesystem::path csv_path;
  std::vector<std::filesystem::path> record_files;
  AggregateStats stats;
};

/// Runs every (value, seed) cell against the built-in LABS objective, plus a
/// conventional baseline twin per cell on non-d_latest axes when the base
/// policy is FIFO. Cells execute on `threads` workers; artifacts are
/// identical to a sequential run.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads);

/// Number of workers: the FMA_THREADS environment variable if set, else the
/// hardware concurrency.
unsigned worker_count();

/// Expands a path or `*`/`?` filename pattern into sorted existing files.
std::vector<std::filesystem::path> expand_pattern(const std::string& pattern);

}  // namespace fmopt::harness
