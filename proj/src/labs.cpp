#include "fmopt/labs.hpp"

#include <bit>
#include <string>
#include <thread>

#include "fmopt/errors.hpp"

namespace fmopt::labs {

namespace {

void require_dimension(std::size_t n) {
  if (n < 2) {
    throw Error(ErrorKind::InvalidDimension,
                "LABS requires N >= 2, got N = " + std::to_string(n));
  }
}

}  // namespace

SpinSequence::SpinSequence(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  require_dimension(spins_.size());
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] != -1 && spins_[i] != 1) {
      throw Error(ErrorKind::InvalidArgument,
                  "SpinSequence: element " + std::to_string(i) + " is not -1/+1");
    }
  }
}

SpinSequence SpinSequence::negated() const {
  std::vector<std::int8_t> out(spins_);
  for (auto& s : out) s = static_cast<std::int8_t>(-s);
  return SpinSequence(std::move(out));
}

SpinSequence SpinSequence::reversed() const {
  return SpinSequence(std::vector<std::int8_t>(spins_.rbegin(), spins_.rend()));
}

SpinSequence spin_from_binary(const BinaryVector& x) {
  require_dimension(x.size());
  std::vector<std::int8_t> spins(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    spins[i] = static_cast<std::int8_t>(2 * static_cast<int>(x[i]) - 1);
  }
  return SpinSequence(std::move(spins));
}

BinaryVector binary_from_spin(const SpinSequence& s) {
  std::vector<std::uint8_t> bits(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    bits[i] = static_cast<std::uint8_t>((s[i] + 1) / 2);
  }
  return BinaryVector(std::move(bits));
}

std::int64_t autocorrelation(const SpinSequence& s, std::size_t lag) {
  const std::size_t n = s.size();
  if (lag < 1 || lag > n - 1) {
    throw Error(ErrorKind::InvalidLag,
                "autocorrelation: lag " + std::to_string(lag) +
                    " outside [1, " + std::to_string(n - 1) + "]");
  }
  std::int64_t sum = 0;
  for (std::size_t i = 0; i + lag < n; ++i) {
    sum += static_cast<std::int64_t>(s[i]) * s[i + lag];
  }
  return sum;
}

LabsValue labs_evaluate(const SpinSequence& s) {
  const std::size_t n = s.size();
  std::int64_t energy = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const std::int64_t ck = autocorrelation(s, k);
    energy += ck * ck;
  }
  if (energy <= 0) {
    // C_{N-1} = s_1 s_N = +-1, so E >= 1 for every N >= 2.
    throw Error(ErrorKind::NumericFailure, "labs_evaluate: nonpositive energy");
  }
  LabsValue v;
  v.energy = energy;
  v.merit_factor = static_cast<double>(n) * static_cast<double>(n) /
                   (2.0 * static_cast<double>(energy));
  v.objective = -v.merit_factor;
  return v;
}

double labs_objective(const BinaryVector& x) {
  return labs_evaluate(spin_from_binary(x)).objective;
}

namespace {

// Energy of the sequence encoded by mask m, where bit (n-1-i) of m set means
// s_{i+1} = +1. With that encoding, ascending m enumerates sequences in
// lexicographic order with -1 before +1. C_k needs only an xor + popcount:
// differing bits at distance k contribute -1, equal bits +1.
std::int64_t energy_of_mask(std::uint32_t m, std::size_t n) {
  std::int64_t energy = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const std::uint32_t window = (n - k >= 32) ? 0xFFFFFFFFu : ((1u << (n - k)) - 1u);
    const std::uint32_t diff = (m ^ (m >> k)) & window;
    const std::int64_t ck =
        static_cast<std::int64_t>(n - k) - 2 * std::popcount(diff);
    energy += ck * ck;
  }
  return energy;
}

SpinSequence sequence_of_mask(std::uint32_t m, std::size_t n) {
  std::vector<std::int8_t> spins(n);
  for (std::size_t i = 0; i < n; ++i) {
    spins[i] = ((m >> (n - 1 - i)) & 1u) ? std::int8_t{1} : std::int8_t{-1};
  }
  return SpinSequence(std::move(spins));
}

struct ScanBest {
  std::int64_t energy = 0;
  std::uint32_t mask = 0;
  bool valid = false;
};

ScanBest scan_range(std::uint64_t begin, std::uint64_t end, std::size_t n) {
  ScanBest best;
  for (std::uint64_t m = begin; m < end; ++m) {
    const std::int64_t e = energy_of_mask(static_cast<std::uint32_t>(m), n);
    if (!best.valid || e < best.energy) {
      best = {e, static_cast<std::uint32_t>(m), true};
    }
  }
  return best;
}

}  // namespace

std::pair<SpinSequence, LabsValue> brute_force_optimum(std::size_t n) {
  if (n < 2 || n > kBruteForceMaxDimension) {
    throw Error(ErrorKind::BudgetExceeded,
                "brute_force_optimum: n = " + std::to_string(n) +
                    " outside [2, " + std::to_string(kBruteForceMaxDimension) + "]");
  }
  const std::uint64_t total = std::uint64_t{1} << n;

  unsigned workers = 1;
  if (n >= 18) {
    workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, 8);
  }

  ScanBest best;
  if (workers <= 1) {
    best = scan_range(0, total, n);
  } else {
    std::vector<ScanBest> partial(workers);
    std::vector<std::thread> threads;
    const std::uint64_t chunk = total / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = (w + 1 == workers) ? total : begin + chunk;
      threads.emplace_back(
          [&partial, w, begin, end, n] { partial[w] = scan_range(begin, end, n); });
    }
    for (auto& t : threads) t.join();
    // Smallest mask wins ties, which is exactly the sequential scan's answer.
    for (const auto& p : partial) {
      if (!p.valid) continue;
      if (!best.valid || p.energy < best.energy ||
          (p.energy == best.energy && p.mask < best.mask)) {
        best = p;
      }
    }
  }

  SpinSequence seq = sequence_of_mask(best.mask, n);
  return {seq, labs_evaluate(seq)};
}

}  // namespace fmopt::labs
