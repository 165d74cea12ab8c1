#include "fmopt/record_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fmopt/errors.hpp"

namespace fmopt::harness {

namespace {

using nlohmann::json;

json config_to_json(const RunSetup& setup) {
  json out = json::object();
  for (const auto& [key, value] : config_items(setup)) {
    out[key] = value;
  }
  return out;
}

json row_to_json(const TraceRow& row) {
  json out = json::object();
  out["type"] = "trace";
  out["iteration"] = row.iteration;
  out["bb_calls"] = row.bb_calls_cumulative;
  out["bb_calls_round"] = row.bb_calls_round;
  out["best_objective"] = row.best_objective;
  out["residual"] = row.residual ? json(*row.residual) : json(nullptr);
  out["train_loss_final"] = row.train_loss_final;
  out["train_loss_curve"] = row.train_loss_every_100;
  out["dataset_size"] = row.dataset_size;
  out["short_batch"] = row.short_batch;
  return out;
}

}  // namespace

std::string record_to_jsonl(const RunRecord& record, const RunSetup& setup,
                            const std::optional<SweepCellMeta>& meta) {
  std::ostringstream out;
  for (const TraceRow& row : record.trace) {
    out << row_to_json(row).dump() << "\n";
  }
  json summary = json::object();
  summary["type"] = "summary";
  summary["config"] = config_to_json(setup);
  summary["seed"] = record.config.seed;
  summary["rng"] = record.rng_identity;
  summary["best_objective"] = record.best_objective;
  summary["best_x"] = record.best_x.to_string();
  summary["final_residual"] = record.final_residual ? json(*record.final_residual) : json(nullptr);
  summary["bb_calls_total"] = record.bb_calls_total;
  summary["incomplete"] = record.incomplete;
  summary["error"] = record.error;
  if (meta) {
    summary["sweep"] = {{"axis", meta->axis},
                        {"value", meta->value},
                        {"seed", meta->seed},
                        {"role", meta->role}};
  }
  out << summary.dump() << "\n";
  return out.str();
}

void write_record_file(const std::filesystem::path& path, const RunRecord& record,
                       const RunSetup& setup, const std::optional<SweepCellMeta>& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::Io, "cannot open record file '" + path.string() + "' for writing");
  }
  out << record_to_jsonl(record, setup, meta);
  if (!out) {
    throw Error(ErrorKind::Io, "failed writing record file '" + path.string() + "'");
  }
}

StoredSummary read_record_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open record file '" + path.string() + "'");
  }
  std::string line;
  std::string last;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
  }
  if (last.empty()) {
    throw Error(ErrorKind::Io, "record file '" + path.string() + "' is empty");
  }
  json summary;
  try {
    summary = json::parse(last);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "record file '" + path.string() + "': " + e.what());
  }
  if (summary.value("type", "") != "summary") {
    throw Error(ErrorKind::Io,
                "record file '" + path.string() + "' has no summary line (truncated run?)");
  }

  StoredSummary out;
  out.file = path;
  try {
    out.best_objective = summary.at("best_objective").get<double>();
    if (!summary.at("final_residual").is_null()) {
      out.final_residual = summary.at("final_residual").get<double>();
    }
    out.bb_calls_total = summary.at("bb_calls_total").get<std::uint64_t>();
    out.seed = summary.at("seed").get<Seed>();
    out.incomplete = summary.at("incomplete").get<bool>();
    if (summary.contains("sweep")) {
      const json& sweep = summary.at("sweep");
      SweepCellMeta meta;
      meta.axis = sweep.at("axis").get<std::string>();
      meta.value = sweep.at("value").get<std::string>();
      meta.seed = sweep.at("seed").get<Seed>();
      meta.role = sweep.at("role").get<std::string>();
      out.meta = meta;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "record file '" + path.string() + "': " + e.what());
  }
  return out;
}

}  // namespace fmopt::harness
