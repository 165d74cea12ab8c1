#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmopt/annealer.hpp"
#include "fmopt/dataset.hpp"
#include "fmopt/fm_training.hpp"
#include "fmopt/rng.hpp"

namespace fmopt {

/// Full loop configuration. Defaults mirror the reference parameter set:
/// K=8, D_init=100, N_iter=1500, 1000 epochs at lr 0.01, linear beta
/// schedule 1e-5 -> 100 over 1000 outer x 10 inner loops, 15 reads and 3
/// added samples per iteration.
struct FmaConfig {
  std::size_t n = 64;
  std::size_t k = 8;
  std::size_t d_init = 100;
  std::size_t d_reads = 15;
  std::size_t d_adds = 3;
  std::uint64_t n_iter = 1500;
  DatasetPolicy policy = DatasetPolicy::conventional();
  TrainConfig train;
  AnnealConfig anneal;
  Seed seed = 0;
  bool reset_params_each_round = false;

  /// Optional pinned stream seeds. When set, that randomness source is
  /// decoupled from `seed`, e.g. to vary only the FM initialization across
  /// repeats while the initial data and annealer streams stay fixed.
  std::optional<Seed> seed_init_data;
  std::optional<Seed> seed_fm_init;
  std::optional<Seed> seed_anneal;

  void validate() const;

  friend bool operator==(const FmaConfig&, const FmaConfig&) = default;
};

struct TraceRow {
  std::uint64_t iteration = 0;
  std::uint64_t bb_calls_cumulative = 0;
  std::uint64_t bb_calls_round = 0;
  double best_objective = 0.0;
  std::optional<double> residual;
  double train_loss_final = 0.0;
  std::vector<double> train_loss_every_100;
  std::size_t dataset_size = 0;
  bool short_batch = false;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct RunRecord {
  FmaConfig config;
  std::string rng_identity;
  std::vector<TraceRow> trace;
  BinaryVector best_x;
  double best_objective = 0.0;
  std::optional<double> final_residual;
  std::uint64_t bb_calls_total = 0;
  bool incomplete = false;
  std::string error;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Runs the full loop: initial dataset, then n_iter rounds of train ->
/// QUBO export -> annealer sampling -> black-box evaluation -> dataset
/// update. All randomness derives from cfg.seed (or the pinned stream
/// seeds). A runtime failure mid-run returns the partial record flagged
/// incomplete instead of throwing; config errors throw. On a completed run,
/// final_dataset (when given) receives the final dataset.
RunRecord run_fma(const FmaConfig& cfg, const BlackBox& bb,
                  std::optional<double> optimum = std::nullopt,
                  Dataset* final_dataset = nullptr);

/// best_objective - optimum, clamped at 0 for reference values rounded a
/// hair below the truth. Throws if best undercuts the reference by more
/// than 1e-9, which signals a wrong reference value.
double residual(double best_objective, double optimum);

/// (v_proposed - v_conventional) / v_conventional; positive means the
/// proposed value is lower (better) for negative-valued objectives.
double improvement_rate(double v_proposed, double v_conventional);

}  // namespace fmopt
