#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fmopt/binary_vector.hpp"

namespace fmopt::labs {

/// Spin sequence S = (s_1, ..., s_N), s_i in {-1,+1}, N >= 2.
class SpinSequence {
 public:
  explicit SpinSequence(std::vector<std::int8_t> spins);

  std::size_t size() const noexcept { return spins_.size(); }
  std::int8_t operator[](std::size_t i) const noexcept { return spins_[i]; }
  const std::vector<std::int8_t>& spins() const noexcept { return spins_; }

  SpinSequence negated() const;
  SpinSequence reversed() const;

  friend bool operator==(const SpinSequence&, const SpinSequence&) = default;

 private:
  std::vector<std::int8_t> spins_;
};

/// Sidelobe energy E(S), merit factor F(S) = N^2 / (2 E), and the
/// minimization objective -F(S).
struct LabsValue {
  std::int64_t energy = 0;
  double merit_factor = 0.0;
  double objective = 0.0;

  friend bool operator==(const LabsValue&, const LabsValue&) = default;
};

/// s_i = 2 x_i - 1. Requires |x| >= 2.
SpinSequence spin_from_binary(const BinaryVector& x);

/// Inverse map, x_i = (s_i + 1) / 2.
BinaryVector binary_from_spin(const SpinSequence& s);

/// Aperiodic autocorrelation C_k(S) = sum_{i=1}^{N-k} s_i s_{i+k},
/// 1 <= k <= N-1.
std::int64_t autocorrelation(const SpinSequence& s, std::size_t lag);

/// E(S) = sum_k C_k^2 in exact integer arithmetic; F and the objective
/// derived from it in double precision.
LabsValue labs_evaluate(const SpinSequence& s);

/// Objective as a black-box over binary inputs: -F(2x - 1).
double labs_objective(const BinaryVector& x);

inline constexpr std::size_t kBruteForceMaxDimension = 24;

/// Exact optimum over all 2^n sequences, 2 <= n <= 24. Ties are broken by
/// the lexicographically smallest sequence with -1 ordered before +1; the
/// scan may be partitioned across threads but the result equals a
/// sequential scan's.
std::pair<SpinSequence, LabsValue> brute_force_optimum(std::size_t n);

}  // namespace fmopt::labs
