#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmopt/fma_driver.hpp"
#include "fmopt/format.hpp"

namespace fmopt::harness {

/// A runnable configuration: the loop config plus harness-only fields.
struct RunSetup {
  FmaConfig config;
  /// Reference objective for residual reporting; when unset, a built-in
  /// value is used if one exists for config.n (see reference.hpp).
  std::optional<double> optimum;

  friend bool operator==(const RunSetup&, const RunSetup&) = default;
};

/// Flat `key = value` text, one pair per line, `#` comments. Keys follow the
/// reference parameter table (n, k, d_init, n_iter, epochs, learning_rate,
/// initial_inverse_temperature, final_inverse_temperature,
/// annealing_schedule, outer_loops, inner_loops, d_reads, d_adds) plus
/// policy, seed, reset_params_each_round, adamw_*, optimum and the optional
/// stream-seed pins.
RunSetup parse_config_text(std::istream& in, const std::string& source_name);
RunSetup parse_config_file(const std::filesystem::path& path);

/// Applies one `key=value` override (the CLI's --set).
void apply_override(RunSetup& setup, std::string_view assignment);

/// Canonical serialization; parsing it back yields an identical RunSetup.
std::string serialize_config(const RunSetup& setup);

/// The (key, value) pairs behind serialize_config, for echoing into records.
std::vector<std::pair<std::string, std::string>> config_items(const RunSetup& setup);

std::string policy_to_string(const DatasetPolicy& policy);
DatasetPolicy policy_from_string(std::string_view text);

}  // namespace fmopt::harness
