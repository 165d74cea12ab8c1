#pragma once

// Shared generators and independent reference computations for the test
// suites. Everything here goes through public forward-evaluation APIs only,
// so it stays a valid oracle for the code paths it checks.

#include <cmath>
#include <cstdint>
#include <vector>

#include "fmopt/binary_vector.hpp"
#include "fmopt/dataset.hpp"
#include "fmopt/fm_model.hpp"
#include "fmopt/fm_training.hpp"
#include "fmopt/rng.hpp"

namespace fmopt::testing {

inline BinaryVector random_binary(std::size_t n, Rng& rng) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = rng.coin_flip() ? 1 : 0;
  return BinaryVector(std::move(bits));
}

inline FmParams random_params(std::size_t n, std::size_t k, Rng& rng, double scale = 1.0) {
  FmParams params;
  params.n = n;
  params.k = k;
  params.omega0 = rng.uniform(-scale, scale);
  params.omega.resize(n);
  for (auto& w : params.omega) w = rng.uniform(-scale, scale);
  params.v.resize(n * k);
  for (auto& value : params.v) value = rng.uniform(-scale, scale);
  return params;
}

/// Direct O(N^2 K) evaluation of the FM model equation, term by term.
inline double fm_evaluate_naive(const FmParams& p, const BinaryVector& x) {
  double out = p.omega0;
  for (std::size_t i = 0; i < p.n; ++i) {
    out += p.omega[i] * static_cast<double>(x[i]);
  }
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t j = i + 1; j < p.n; ++j) {
      double dot = 0.0;
      for (std::size_t f = 0; f < p.k; ++f) {
        dot += p.v[i * p.k + f] * p.v[j * p.k + f];
      }
      out += dot * static_cast<double>(x[i]) * static_cast<double>(x[j]);
    }
  }
  return out;
}

/// Central finite differences of mse_loss over every parameter; the
/// reference for the analytic gradient.
inline FmGradient numeric_gradient(const FmParams& params, std::span<const DataPoint> data,
                                   double h = 1e-5) {
  FmGradient grad = FmGradient::zeros_like(params);
  auto central = [&](FmParams& p, double& slot) {
    const double saved = slot;
    slot = saved + h;
    const double up = mse_loss(p, data);
    slot = saved - h;
    const double down = mse_loss(p, data);
    slot = saved;
    return (up - down) / (2.0 * h);
  };
  FmParams p = params;
  grad.omega0 = central(p, p.omega0);
  for (std::size_t i = 0; i < p.omega.size(); ++i) grad.omega[i] = central(p, p.omega[i]);
  for (std::size_t i = 0; i < p.v.size(); ++i) grad.v[i] = central(p, p.v[i]);
  return grad;
}

/// |a - b| <= max(abs_floor, rel * max(|a|, |b|)).
inline bool close_enough(double a, double b, double rel, double abs_floor) {
  const double diff = std::fabs(a - b);
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return diff <= std::max(abs_floor, rel * scale);
}

inline std::vector<DataPoint> random_dataset(std::size_t n, std::size_t count, Rng& rng,
                                             double y_scale = 2.0) {
  std::vector<DataPoint> data;
  data.reserve(count);
  for (std::size_t d = 0; d < count; ++d) {
    data.push_back(DataPoint{random_binary(n, rng), rng.uniform(-y_scale, y_scale), d});
  }
  return data;
}

/// Random QUBO with all coefficients (diagonal and upper) uniform in
/// [-1, 1]; the annealer-versus-oracle instance family.
inline Qubo random_qubo(std::size_t n, Rng& rng) {
  Qubo q(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      q.set(i, j, rng.uniform(-1.0, 1.0));
    }
  }
  return q;
}

}  // namespace fmopt::testing
