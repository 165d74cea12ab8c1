#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fmopt/dataset.hpp"
#include "fmopt/fm_model.hpp"

namespace fmopt {

/// Gradient of the loss, shape-congruent with FmParams.
struct FmGradient {
  std::size_t n = 0;
  std::size_t k = 0;
  double omega0 = 0.0;
  std::vector<double> omega;
  std::vector<double> v;

  static FmGradient zeros_like(const FmParams& params);
};

struct AdamWState {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
  std::uint64_t step_count = 0;
  FmGradient m;      // first moment
  FmGradient v_acc;  // second moment

  static AdamWState create(const FmParams& shape, double lr, double beta1 = 0.9,
                           double beta2 = 0.999, double epsilon = 1e-8,
                           double weight_decay = 0.01);
};

struct TrainConfig {
  std::uint64_t epochs = 1000;
  double lr = 0.01;
  double adamw_beta1 = 0.9;
  double adamw_beta2 = 0.999;
  double adamw_epsilon = 1e-8;
  double adamw_weight_decay = 0.01;

  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Mean squared error (1/D) sum_d [f_FM(x_d) - y_d]^2.
double mse_loss(const FmParams& params, std::span<const DataPoint> data);

/// Analytic gradient of mse_loss, accumulated over the data in order.
FmGradient loss_gradient(const FmParams& params, std::span<const DataPoint> data);

/// Fused forward/backward pass; returns the loss at the current params.
double loss_and_gradient(const FmParams& params, std::span<const DataPoint> data,
                         FmGradient& grad);

/// One decoupled-weight-decay Adam update, in place.
void adamw_step(FmParams& params, const FmGradient& grad, AdamWState& state);

struct TrainResult {
  double final_loss = 0.0;
  /// Loss before the update at epochs 100, 200, ... (diagnostic trace).
  std::vector<double> loss_every_100;
};

/// cfg.epochs full-batch AdamW steps with a fresh optimizer state.
TrainResult train(FmParams& params, std::span<const DataPoint> data, const TrainConfig& cfg);

struct DilutionDiagnostic {
  double total_loss = 0.0;          // MSE over the D+1 points
  double newest_contribution = 0.0; // dilution_weight * squared error of the newest point
  double dilution_weight = 0.0;     // 1 / (D + 1)
};

/// How much a single appended point weighs in the D+1-point loss.
DilutionDiagnostic dilution_diagnostic(const FmParams& params, std::span<const DataPoint> data,
                                       const BinaryVector& x_new, double y_new);

}  // namespace fmopt
