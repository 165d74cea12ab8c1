#include "fmopt/fm_training.hpp"

#include <cmath>
#include <string>

#include "fmopt/errors.hpp"

namespace fmopt {

FmGradient FmGradient::zeros_like(const FmParams& params) {
  FmGradient g;
  g.n = params.n;
  g.k = params.k;
  g.omega0 = 0.0;
  g.omega.assign(params.n, 0.0);
  g.v.assign(params.n * params.k, 0.0);
  return g;
}

AdamWState AdamWState::create(const FmParams& shape, double lr, double beta1, double beta2,
                              double epsilon, double weight_decay) {
  AdamWState state;
  state.lr = lr;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.epsilon = epsilon;
  state.weight_decay = weight_decay;
  state.step_count = 0;
  state.m = FmGradient::zeros_like(shape);
  state.v_acc = FmGradient::zeros_like(shape);
  return state;
}

void TrainConfig::validate() const {
  if (epochs < 1) {
    throw Error(ErrorKind::InvalidArgument, "train: epochs must be >= 1");
  }
  if (!(lr > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "train: learning rate must be positive");
  }
  if (!(adamw_beta1 > 0.0 && adamw_beta1 < 1.0) || !(adamw_beta2 > 0.0 && adamw_beta2 < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "train: AdamW betas must lie in (0, 1)");
  }
  if (!(adamw_epsilon > 0.0) || adamw_weight_decay < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "train: bad epsilon or weight decay");
  }
}

namespace {

void require_nonempty(std::span<const DataPoint> data, const char* what) {
  if (data.empty()) {
    throw Error(ErrorKind::EmptyDataset, std::string(what) + ": dataset is empty");
  }
}

void require_congruent(const FmParams& params, const FmGradient& grad, const char* what) {
  if (grad.n != params.n || grad.k != params.k || grad.omega.size() != params.omega.size() ||
      grad.v.size() != params.v.size()) {
    throw Error(ErrorKind::InvalidDimension, std::string(what) + ": shape mismatch");
  }
}

}  // namespace

double mse_loss(const FmParams& params, std::span<const DataPoint> data) {
  require_nonempty(data, "mse_loss");
  double total = 0.0;
  for (const DataPoint& point : data) {
    const double r = fm_evaluate(params, point.x) - point.y;
    total += r * r;
  }
  return total / static_cast<double>(data.size());
}

double loss_and_gradient(const FmParams& params, std::span<const DataPoint> data,
                         FmGradient& grad) {
  require_nonempty(data, "loss_gradient");
  grad = FmGradient::zeros_like(params);
  const std::size_t n = params.n;
  const std::size_t k = params.k;
  const double inv_d = 1.0 / static_cast<double>(data.size());

  std::vector<double> factor_sum(k);
  double total = 0.0;
  for (const DataPoint& point : data) {
    const BinaryVector& x = point.x;
    if (x.size() != n) {
      throw Error(ErrorKind::InvalidDimension, "loss_gradient: datum dimension mismatch");
    }
    // Forward pass, reusing the per-factor sums for the backward pass.
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t f = 0; f < k; ++f) factor_sum[f] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!x[i]) continue;
      linear += params.omega[i];
      const double* vi = &params.v[i * k];
      for (std::size_t f = 0; f < k; ++f) factor_sum[f] += vi[f];
    }
    for (std::size_t f = 0; f < k; ++f) quad += factor_sum[f] * factor_sum[f];
    double quad_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!x[i]) continue;
      const double* vi = &params.v[i * k];
      for (std::size_t f = 0; f < k; ++f) quad_sq += vi[f] * vi[f];
    }
    const double prediction = params.omega0 + linear + 0.5 * (quad - quad_sq);
    const double r = prediction - point.y;
    total += r * r;

    // d f / d omega0 = 1, d f / d omega_i = x_i,
    // d f / d v_if = x_i * factor_sum_f - v_if * x_i^2.
    const double coef = 2.0 * r * inv_d;
    grad.omega0 += coef;
    for (std::size_t i = 0; i < n; ++i) {
      if (!x[i]) continue;
      grad.omega[i] += coef;
      const double* vi = &params.v[i * k];
      double* gi = &grad.v[i * k];
      for (std::size_t f = 0; f < k; ++f) {
        gi[f] += coef * (factor_sum[f] - vi[f]);
      }
    }
  }
  return total * inv_d;
}

FmGradient loss_gradient(const FmParams& params, std::span<const DataPoint> data) {
  FmGradient grad;
  loss_and_gradient(params, data, grad);
  return grad;
}

namespace {

void adamw_component(double& theta, double g, double& m, double& v, double lr, double beta1,
                     double beta2, double epsilon, double weight_decay, double bias1,
                     double bias2) {
  m = beta1 * m + (1.0 - beta1) * g;
  v = beta2 * v + (1.0 - beta2) * g * g;
  const double m_hat = m / bias1;
  const double v_hat = v / bias2;
  theta -= lr * (m_hat / (std::sqrt(v_hat) + epsilon) + weight_decay * theta);
}

}  // namespace

void adamw_step(FmParams& params, const FmGradient& grad, AdamWState& state) {
  require_congruent(params, grad, "adamw_step");
  auto check_finite = [](double g, std::size_t flat_index) {
    if (!std::isfinite(g)) {
      throw Error(ErrorKind::NumericFailure,
                  "adamw_step: non-finite gradient component at flat index " +
                      std::to_string(flat_index));
    }
  };
  check_finite(grad.omega0, 0);
  for (std::size_t i = 0; i < grad.omega.size(); ++i) check_finite(grad.omega[i], 1 + i);
  for (std::size_t i = 0; i < grad.v.size(); ++i) check_finite(grad.v[i], 1 + grad.omega.size() + i);

  state.step_count += 1;
  const double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));

  adamw_component(params.omega0, grad.omega0, state.m.omega0, state.v_acc.omega0, state.lr,
                  state.beta1, state.beta2, state.epsilon, state.weight_decay, bias1, bias2);
  for (std::size_t i = 0; i < params.omega.size(); ++i) {
    adamw_component(params.omega[i], grad.omega[i], state.m.omega[i], state.v_acc.omega[i],
                    state.lr, state.beta1, state.beta2, state.epsilon, state.weight_decay, bias1,
                    bias2);
  }
  for (std::size_t i = 0; i < params.v.size(); ++i) {
    adamw_component(params.v[i], grad.v[i], state.m.v[i], state.v_acc.v[i], state.lr, state.beta1,
                    state.beta2, state.epsilon, state.weight_decay, bias1, bias2);
  }
}

TrainResult train(FmParams& params, std::span<const DataPoint> data, const TrainConfig& cfg) {
  cfg.validate();
  require_nonempty(data, "train");
  AdamWState state = AdamWState::create(params, cfg.lr, cfg.adamw_beta1, cfg.adamw_beta2,
                                        cfg.adamw_epsilon, cfg.adamw_weight_decay);
  TrainResult result;
  FmGradient grad;
  for (std::uint64_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double loss = loss_and_gradient(params, data, grad);
    if (epoch % 100 == 0) {
      result.loss_every_100.push_back(loss);
    }
    adamw_step(params, grad, state);
  }
  result.final_loss = mse_loss(params, data);
  return result;
}

DilutionDiagnostic dilution_diagnostic(const FmParams& params, std::span<const DataPoint> data,
                                       const BinaryVector& x_new, double y_new) {
  DilutionDiagnostic diag;
  const double d_plus_1 = static_cast<double>(data.size()) + 1.0;
  diag.dilution_weight = 1.0 / d_plus_1;
  const double r_new = fm_evaluate(params, x_new) - y_new;
  diag.newest_contribution = diag.dilution_weight * r_new * r_new;
  double total = r_new * r_new;
  for (const DataPoint& point : data) {
    const double r = fm_evaluate(params, point.x) - point.y;
    total += r * r;
  }
  diag.total_loss = total / d_plus_1;
  return diag;
}

}  // namespace fmopt
