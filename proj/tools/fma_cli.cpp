#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmopt/annealer.hpp"
#include "fmopt/config.hpp"
#include "fmopt/errors.hpp"
#include "fmopt/fma_driver.hpp"
#include "fmopt/labs.hpp"
#include "fmopt/record_io.hpp"
#include "fmopt/reference.hpp"
#include "fmopt/sweep.hpp"

namespace {

using namespace fmopt;
using namespace fmopt::harness;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Qubo read_qubo_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open qubo file '" + path + "'");
  }
  return Qubo::read_text(in);
}

int cmd_run(const std::optional<std::string>& config_path, const std::vector<std::string>& sets,
            const std::string& output, const std::optional<std::string>& dump_dataset) {
  RunSetup setup;
  if (config_path) setup = parse_config_file(*config_path);
  for (const std::string& assignment : sets) apply_override(setup, assignment);
  setup.config.validate();

  const std::optional<double> optimum = reference_optimum(setup.config.n, setup.optimum);
  const BlackBox bb = [](const BinaryVector& x) { return labs::labs_objective(x); };

  Dataset final_dataset(DatasetPolicy::conventional());
  const RunRecord record =
      run_fma(setup.config, bb, optimum, dump_dataset ? &final_dataset : nullptr);
  write_record_file(output, record, setup);

  if (dump_dataset) {
    std::ofstream out(*dump_dataset, std::ios::binary);
    if (!out) {
      throw Error(ErrorKind::Io, "cannot open '" + *dump_dataset + "' for writing");
    }
    final_dataset.dump(out);
  }

  if (record.incomplete) {
    std::cerr << "run aborted: " << record.error << "\n";
    std::cerr << "partial record written to " << output << "\n";
    return 3;
  }
  std::cout << "best_objective = " << format_double(record.best_objective) << "\n";
  std::cout << "residual = "
            << (record.final_residual ? format_double(*record.final_residual) : "n/a") << "\n";
  std::cout << "bb_calls = " << record.bb_calls_total << "\n";
  std::cout << "record = " << output << "\n";
  return 0;
}

int cmd_sweep(const std::string& spec_path) {
  const SweepSpec spec = parse_sweep_file(spec_path);
  const SweepResult result = run_sweep(spec, worker_count());
  std::cout << "cells = " << result.record_files.size() << "\n";
  std::cout << "failed_cells = " << result.stats.failed_cells << "\n";
  std::cout << "aggregate = " << result.csv_path.string() << "\n";
  return result.stats.failed_cells == 0 ? 0 : 3;
}

int cmd_stats(const std::vector<std::string>& patterns, const std::string& output) {
  std::vector<std::filesystem::path> files;
  for (const std::string& pattern : patterns) {
    for (auto& path : expand_pattern(pattern)) files.push_back(path);
  }
  if (files.empty()) {
    throw Error(ErrorKind::InvalidArgument, "stats: no record files matched");
  }
  std::vector<StoredSummary> summaries;
  summaries.reserve(files.size());
  for (const auto& file : files) {
    // The aggregate CSV may live next to the records; skip non-jsonl files.
    if (file.extension() != ".jsonl") continue;
    summaries.push_back(read_record_summary(file));
  }
  if (summaries.empty()) {
    throw Error(ErrorKind::InvalidArgument, "stats: no .jsonl record files matched");
  }
  const AggregateStats stats = aggregate_summaries(std::move(summaries));
  const std::string csv = render_stats_csv(stats);
  if (output.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      throw Error(ErrorKind::Io, "cannot open '" + output + "' for writing");
    }
    out << csv;
    std::cout << "aggregate = " << output << "\n";
  }
  return 0;
}

int cmd_oracle_labs(std::size_t n) {
  const auto start = std::chrono::steady_clock::now();
  const auto [seq, value] = labs::brute_force_optimum(n);
  const double secs = elapsed_seconds(start);
  std::cout << "n = " << n << "\n";
  std::cout << "energy = " << value.energy << "\n";
  std::cout << "merit_factor = " << format_double(value.merit_factor) << "\n";
  std::cout << "objective = " << format_double(value.objective) << "\n";
  std::cout << "optimizer = " << labs::binary_from_spin(seq).to_string() << "\n";
  std::cout << "wall_time_s = " << format_double(secs) << "\n";
  return 0;
}

int cmd_oracle_qubo(const std::string& path) {
  const Qubo q = read_qubo_file(path);
  const auto start = std::chrono::steady_clock::now();
  const auto [x, energy] = brute_force_qubo(q);
  const double secs = elapsed_seconds(start);
  std::cout << "n = " << q.size() << "\n";
  std::cout << "energy = " << format_double(energy) << "\n";
  std::cout << "optimizer = " << x.to_string() << "\n";
  std::cout << "wall_time_s = " << format_double(secs) << "\n";
  return 0;
}

int cmd_anneal(const std::string& path, const AnnealConfig& cfg, Seed seed) {
  const Qubo q = read_qubo_file(path);
  const SampleSet set = sample(q, cfg, seed);
  std::cout << "# read_index energy bitstring\n";
  for (const SampleRead& read : set.reads) {
    std::cout << read.read_index << " " << format_double(read.energy) << " "
              << read.x.to_string() << "\n";
  }
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
      return 2;
    case ErrorKind::BudgetExceeded:
      return 4;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factorization machine with annealing: black-box optimization harness"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one FMA loop on the built-in LABS objective");
  std::optional<std::string> run_config;
  std::vector<std::string> run_sets;
  std::string run_output = "run_record.jsonl";
  std::optional<std::string> run_dump;
  run->add_option("--config", run_config, "Config file (key = value lines)");
  run->add_option("--set", run_sets, "Override, e.g. --set n=16")->take_all();
  run->add_option("--output", run_output, "Record output path (JSON lines)");
  run->add_option("--dump-dataset", run_dump, "Also dump the final dataset to this path");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a spec file");
  std::string sweep_spec;
  sweep->add_option("--spec", sweep_spec, "Sweep spec file")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "Recompute aggregate statistics from record files");
  std::vector<std::string> stats_patterns;
  std::string stats_output;
  stats->add_option("records", stats_patterns, "Record files or glob patterns")->required();
  stats->add_option("--output", stats_output, "CSV output path (default: stdout)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact brute-force optima");
  oracle->require_subcommand(1);
  auto* oracle_labs = oracle->add_subcommand("labs", "Exhaustive LABS optimum (n <= 24)");
  std::size_t oracle_n = 0;
  oracle_labs->add_option("--n", oracle_n, "Sequence length")->required();
  auto* oracle_qubo = oracle->add_subcommand("qubo", "Exhaustive QUBO minimum (n <= 24)");
  std::string oracle_file;
  oracle_qubo->add_option("--input", oracle_file, "QUBO triple-format file")->required();

  // anneal
  auto* anneal = app.add_subcommand("anneal", "Sample a QUBO file with the annealer");
  std::string anneal_file;
  AnnealConfig anneal_cfg;
  Seed anneal_seed = 0;
  anneal->add_option("--input", anneal_file, "QUBO triple-format file")->required();
  anneal->add_option("--reads", anneal_cfg.num_reads, "Number of reads");
  anneal->add_option("--outer-loops", anneal_cfg.outer_loops, "Schedule steps");
  anneal->add_option("--inner-loops", anneal_cfg.inner_loops, "Sweeps per step");
  anneal->add_option("--beta-initial", anneal_cfg.beta_initial, "Initial inverse temperature");
  anneal->add_option("--beta-final", anneal_cfg.beta_final, "Final inverse temperature");
  anneal->add_option("--seed", anneal_seed, "Sampler seed");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_config, run_sets, run_output, run_dump);
    if (sweep->parsed()) return cmd_sweep(sweep_spec);
    if (stats->parsed()) return cmd_stats(stats_patterns, stats_output);
    if (oracle->parsed()) {
      if (oracle_labs->parsed()) return cmd_oracle_labs(oracle_n);
      if (oracle_qubo->parsed()) return cmd_oracle_qubo(oracle_file);
    }
    if (anneal->parsed()) return cmd_anneal(anneal_file, anneal_cfg, anneal_seed);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
