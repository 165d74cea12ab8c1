#include "fmopt/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmopt/errors.hpp"

namespace fmopt {

void AnnealConfig::validate() const {
  if (!(beta_initial > 0.0) || !(beta_final > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "anneal: inverse temperatures must be positive");
  }
  if (beta_initial > beta_final) {
    throw Error(ErrorKind::InvalidArgument, "anneal: beta_initial must be <= beta_final");
  }
  if (outer_loops < 1 || inner_loops < 1 || num_reads < 1) {
    throw Error(ErrorKind::InvalidArgument,
                "anneal: outer_loops, inner_loops and num_reads must be >= 1");
  }
}

namespace {

// Dense mirror of the Qubo: diagonal as local biases plus a full symmetric
// coupling matrix, so local fields can be maintained in O(N) per accepted
// flip.
struct DenseQubo {
  std::size_t n;
  double constant;
  std::vector<double> diag;
  std::vector<double> coupling;  // n*n, symmetric, zero diagonal

  explicit DenseQubo(const Qubo& q)
      : n(q.size()), constant(q.constant()), diag(n, 0.0), coupling(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = q.at(i, i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const double value = q.at(i, j);
        coupling[i * n + j] = value;
        coupling[j * n + i] = value;
      }
    }
  }
};

}  // namespace

double flip_delta(const Qubo& q, const std::vector<std::uint8_t>& x, std::size_t i) {
  const std::size_t n = q.size();
  if (x.size() != n || i >= n) {
    throw Error(ErrorKind::InvalidArgument, "flip_delta: bad state or index");
  }
  double field = q.at(i, i);
  for (std::size_t j = 0; j < i; ++j) {
    if (x[j]) field += q.at(j, i);
  }
  for (std::size_t j = i + 1; j < n; ++j) {
    if (x[j]) field += q.at(i, j);
  }
  return (x[i] ? -1.0 : 1.0) * field;
}

std::pair<BinaryVector, double> anneal_read(const Qubo& q, const AnnealConfig& cfg, Rng& rng) {
  cfg.validate();
  const DenseQubo dense(q);
  const std::size_t n = dense.n;

  std::vector<std::uint8_t> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.coin_flip() ? 1 : 0;
  }

  // Local fields L_i = diag_i + sum_j W_ij x_j; flipping i changes the
  // energy by (1 - 2 x_i) L_i.
  std::vector<double> field(dense.diag);
  double energy = dense.constant;
  for (std::size_t i = 0; i < n; ++i) {
    if (!x[i]) continue;
    energy += dense.diag[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (x[j]) energy += dense.coupling[i * n + j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &dense.coupling[i * n];
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j]) acc += row[j];
    }
    field[i] += acc;
  }

  std::vector<std::uint8_t> best_x(x);
  double best_energy = energy;

  const std::uint64_t steps = cfg.outer_loops;
  for (std::uint64_t t = 0; t < steps; ++t) {
    const double beta =
        (steps == 1)
            ? cfg.beta_initial
            : cfg.beta_initial + (cfg.beta_final - cfg.beta_initial) *
                                     static_cast<double>(t) / static_cast<double>(steps - 1);
    for (std::uint64_t sweep = 0; sweep < cfg.inner_loops; ++sweep) {
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = (x[i] ? -1.0 : 1.0) * field[i];
        bool accept = delta <= 0.0;
        if (!accept) {
          accept = rng.uniform01() < std::exp(-beta * delta);
        }
        if (!accept) continue;
        const double sign = x[i] ? -1.0 : 1.0;
        x[i] ^= 1u;
        energy += delta;
        const double* row = &dense.coupling[i * n];
        for (std::size_t j = 0; j < n; ++j) {
          field[j] += row[j] * sign;
        }
        if (energy < best_energy) {
          best_energy = energy;
          best_x = x;
        }
      }
    }
  }

  BinaryVector best(std::move(best_x));
  // Recompute from scratch so the reported energy is exact, not the
  // incrementally tracked one.
  return {best, qubo_evaluate(q, best)};
}

SampleSet sample(const Qubo& q, const AnnealConfig& cfg, Seed seed) {
  cfg.validate();
  SampleSet set;
  set.reads.reserve(cfg.num_reads);
  for (std::uint64_t r = 0; r < cfg.num_reads; ++r) {
    Rng rng(derive_seed(seed, "read", r));
    auto [x, energy] = anneal_read(q, cfg, rng);
    set.reads.push_back(SampleRead{std::move(x), energy, r});
  }
  std::sort(set.reads.begin(), set.reads.end(), [](const SampleRead& a, const SampleRead& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.read_index < b.read_index;
  });
  return set;
}

namespace {

struct QuboScan {
  const DenseQubo& dense;
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> best_x;
  double best_energy = 0.0;
  bool found = false;

  explicit QuboScan(const DenseQubo& d) : dense(d), x(d.n, 0) {}

  // Depth-first in lexicographic order (0 branch first), carrying the
  // partial energy; keeping only strict improvements makes the first
  // minimum found the lexicographically smallest one.
  void visit(std::size_t depth, double acc) {
    if (depth == dense.n) {
      if (!found || acc < best_energy) {
        found = true;
        best_energy = acc;
        best_x = x;
      }
      return;
    }
    x[depth] = 0;
    visit(depth + 1, acc);
    double delta = dense.diag[depth];
    const double* col = &dense.coupling[depth * dense.n];
    for (std::size_t j = 0; j < depth; ++j) {
      if (x[j]) delta += col[j];
    }
    x[depth] = 1;
    visit(depth + 1, acc + delta);
    x[depth] = 0;
  }
};

}  // namespace

std::pair<BinaryVector, double> brute_force_qubo(const Qubo& q) {
  if (q.size() > kQuboBruteForceMaxDimension) {
    throw Error(ErrorKind::BudgetExceeded,
                "brute_force_qubo: N = " + std::to_string(q.size()) + " exceeds " +
                    std::to_string(kQuboBruteForceMaxDimension));
  }
  const DenseQubo dense(q);
  QuboScan scan(dense);
  scan.visit(0, dense.constant);
  BinaryVector best(std::move(scan.best_x));
  return {best, qubo_evaluate(q, best)};
}

}  // namespace fmopt
