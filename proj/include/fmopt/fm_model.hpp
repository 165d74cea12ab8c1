#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "fmopt/binary_vector.hpp"
#include "fmopt/rng.hpp"

namespace fmopt {

/// Factorization-machine parameters: bias, N linear weights, and N factor
/// rows of length K whose pairwise inner products form the quadratic
/// coefficients.
struct FmParams {
  std::size_t n = 0;
  std::size_t k = 0;
  double omega0 = 0.0;
  std::vector<double> omega;  // size n
  std::vector<double> v;      // size n * k, row-major

  double v_at(std::size_t i, std::size_t f) const { return v[i * k + f]; }
  double& v_at(std::size_t i, std::size_t f) { return v[i * k + f]; }

  /// Total number of scalar parameters (1 + n + n*k).
  std::size_t parameter_count() const { return 1 + n + n * k; }

  bool all_finite() const;

  friend bool operator==(const FmParams&, const FmParams&) = default;
};

/// Quadratic form over binary variables: constant + diagonal (linear) terms
/// + strictly-upper pairwise terms. Stored packed upper-triangular.
class Qubo {
 public:
  explicit Qubo(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double constant() const noexcept { return constant_; }
  void set_constant(double c) { constant_ = c; }

  double at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);

  /// Triple text format: `n <N>` header, `c <constant>` line, then one
  /// `i j value` line per nonzero (0-based, i <= j, diagonal = linear).
  void write_text(std::ostream& out) const;
  static Qubo read_text(std::istream& in);

  friend bool operator==(const Qubo&, const Qubo&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  double constant_ = 0.0;
  std::vector<double> upper_;  // packed rows i, columns j >= i
};

/// f(x) = omega0 + sum_i omega_i x_i + sum_{i<j} <v_i, v_j> x_i x_j,
/// evaluated through the O(NK) factored form.
double fm_evaluate(const FmParams& params, const BinaryVector& x);

/// Random initialization targeting unit variance for the linear and
/// quadratic terms under x_i ~ Bernoulli(1/2): omega0 = 0,
/// omega_i ~ U[-L1, L1) with L1 = sqrt(6/N),
/// v_{i,f} ~ U[-L2, L2) with L2 = (72 / (K N (N-1)))^{1/4}.
FmParams init_params(std::size_t n, std::size_t k, Rng& rng);

/// Exact QUBO export: constant = omega0, Q_ii = omega_i, Q_ij = <v_i, v_j>.
Qubo export_qubo(const FmParams& params);

double qubo_evaluate(const Qubo& q, const BinaryVector& x);

}  // namespace fmopt
