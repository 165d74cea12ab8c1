#include "fmopt/fma_driver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmopt/errors.hpp"
#include "fmopt/fm_model.hpp"

namespace fmopt {

void FmaConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(ErrorKind::Config, field + ": " + why);
  };
  if (n < 2) fail("n", "must be >= 2");
  if (k < 1) fail("k", "must be >= 1");
  if (d_init < 1) fail("d_init", "must be >= 1");
  if (n < 64 && d_init > (std::uint64_t{1} << n)) fail("d_init", "exceeds 2^n distinct vectors");
  if (d_reads < 1) fail("d_reads", "must be >= 1");
  if (d_adds < 1) fail("d_adds", "must be >= 1");
  if (d_adds > d_reads) fail("d_adds", "must be <= d_reads");
  if (n_iter < 1) fail("n_iter", "must be >= 1");
  if (policy.kind == PolicyKind::Fifo && policy.d_latest < 1) fail("policy", "fifo cap must be >= 1");
  try {
    train.validate();
  } catch (const Error& e) {
    fail("train", e.what());
  }
  try {
    anneal.validate();
  } catch (const Error& e) {
    fail("anneal", e.what());
  }
}

namespace {

struct CountingBlackBox {
  const BlackBox& fn;
  std::uint64_t calls = 0;

  BlackBox counted() {
    return [this](const BinaryVector& x) {
      ++calls;
      return fn(x);
    };
  }
};

}  // namespace

RunRecord run_fma(const FmaConfig& cfg, const BlackBox& bb, std::optional<double> optimum,
                  Dataset* final_dataset) {
  cfg.validate();

  RunRecord record;
  record.config = cfg;
  record.rng_identity = std::string(Rng::kIdentity);
  record.trace.reserve(cfg.n_iter);

  const Seed init_seed = cfg.seed_init_data.value_or(derive_seed(cfg.seed, "init-data"));
  const Seed fm_seed = cfg.seed_fm_init.value_or(derive_seed(cfg.seed, "fm-init"));
  const Seed anneal_seed = cfg.seed_anneal.value_or(derive_seed(cfg.seed, "anneal"));

  CountingBlackBox counter{bb};
  const BlackBox counted = counter.counted();

  double best = 0.0;
  BinaryVector best_x;
  bool have_best = false;

  try {
    Rng init_rng(init_seed);
    Dataset ds = generate_initial(cfg.n, cfg.d_init, counted, init_rng, cfg.policy);

    for (const DataPoint& point : ds.entries()) {
      if (!have_best || point.y < best) {
        best = point.y;
        best_x = point.x;
        have_best = true;
      }
    }

    Rng fm_rng(fm_seed);
    FmParams params = init_params(cfg.n, cfg.k, fm_rng);

    AnnealConfig anneal_cfg = cfg.anneal;
    anneal_cfg.num_reads = cfg.d_reads;

    for (std::uint64_t round = 1; round <= cfg.n_iter; ++round) {
      if (cfg.reset_params_each_round && round > 1) {
        Rng round_rng(derive_seed(fm_seed, "round", round));
        params = init_params(cfg.n, cfg.k, round_rng);
      }

      const auto view =
          (round == 1) ? ds.initial_training_view()
                       : std::span<const DataPoint>(ds.entries().data(), ds.entries().size());
      const TrainResult trained = train(params, view, cfg.train);

      const Qubo qubo = export_qubo(params);
      const SampleSet samples = sample(qubo, anneal_cfg, derive_seed(anneal_seed, "round", round));
      const SelectionResult selection = select_lowest(samples, cfg.d_adds, counted);

      for (const auto& [x, y] : selection.evaluated) {
        if (y < best) {
          best = y;
          best_x = x;
        }
      }
      ds.add_batch(selection.chosen);

      TraceRow row;
      row.iteration = round;
      row.bb_calls_cumulative = counter.calls;
      row.bb_calls_round = selection.bb_calls;
      row.best_objective = best;
      if (optimum) row.residual = residual(best, *optimum);
      row.train_loss_final = trained.final_loss;
      row.train_loss_every_100 = trained.loss_every_100;
      row.dataset_size = ds.size();
      row.short_batch = selection.short_batch;
      record.trace.push_back(std::move(row));
    }
    if (final_dataset) *final_dataset = ds;
  } catch (const Error& e) {
    record.incomplete = true;
    record.error = e.what();
  }

  record.best_x = best_x;
  record.best_objective = best;
  record.bb_calls_total = counter.calls;
  if (have_best && !record.incomplete && optimum) {
    record.final_residual = residual(best, *optimum);
  }
  return record;
}

double residual(double best_objective, double optimum) {
  if (!(optimum <= best_objective + 1e-9)) {
    throw Error(ErrorKind::ReferenceValue,
                "residual: best objective " + std::to_string(best_objective) +
                    " undercuts the reference optimum " + std::to_string(optimum));
  }
  return std::max(0.0, best_objective - optimum);
}

double improvement_rate(double v_proposed, double v_conventional) {
  if (v_conventional == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "improvement_rate: zero conventional value");
  }
  return (v_proposed - v_conventional) / v_conventional;
}

}  // namespace fmopt
