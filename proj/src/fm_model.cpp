#include "fmopt/fm_model.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "fmopt/errors.hpp"

namespace fmopt {

namespace {

void require_same_dimension(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw Error(ErrorKind::InvalidDimension,
                std::string(what) + ": dimension mismatch, expected " +
                    std::to_string(expected) + ", got " + std::to_string(got));
  }
}

}  // namespace

bool FmParams::all_finite() const {
  if (!std::isfinite(omega0)) return false;
  for (double w : omega) {
    if (!std::isfinite(w)) return false;
  }
  for (double value : v) {
    if (!std::isfinite(value)) return false;
  }
  return true;
}

Qubo::Qubo(std::size_t n) : n_(n), upper_(n * (n + 1) / 2, 0.0) {
  if (n == 0) {
    throw Error(ErrorKind::InvalidArgument, "Qubo: dimension must be >= 1");
  }
}

std::size_t Qubo::index(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_ || i > j) {
    throw Error(ErrorKind::InvalidArgument,
                "Qubo: index (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") outside upper triangle of size " + std::to_string(n_));
  }
  return i * n_ - i * (i - 1) / 2 + (j - i);
}

double Qubo::at(std::size_t i, std::size_t j) const { return upper_[index(i, j)]; }

void Qubo::set(std::size_t i, std::size_t j, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NumericFailure,
                "Qubo: non-finite coefficient at (" + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
  }
  upper_[index(i, j)] = value;
}

void Qubo::write_text(std::ostream& out) const {
  out << "n " << n_ << "\n";
  out << "c " << constant_ << "\n";
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      const double value = at(i, j);
      if (value != 0.0) {
        out << i << " " << j << " " << value << "\n";
      }
    }
  }
}

Qubo Qubo::read_text(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  double constant = 0.0;
  std::vector<std::tuple<std::size_t, std::size_t, double>> triples;

  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head == "n") {
      if (!(fields >> n) || n == 0) {
        throw Error(ErrorKind::Io, "qubo text: bad dimension on line " + std::to_string(line_no));
      }
      have_n = true;
    } else if (head == "c") {
      if (!(fields >> constant)) {
        throw Error(ErrorKind::Io, "qubo text: bad constant on line " + std::to_string(line_no));
      }
    } else {
      std::size_t i = 0, j = 0;
      double value = 0.0;
      std::istringstream triple(line);
      if (!(triple >> i >> j >> value)) {
        throw Error(ErrorKind::Io, "qubo text: bad triple on line " + std::to_string(line_no));
      }
      triples.emplace_back(i, j, value);
    }
  }
  if (!have_n) {
    throw Error(ErrorKind::Io, "qubo text: missing 'n <N>' header line");
  }
  Qubo q(n);
  q.set_constant(constant);
  for (const auto& [i, j, value] : triples) {
    q.set(i, j, value);
  }
  return q;
}

double fm_evaluate(const FmParams& params, const BinaryVector& x) {
  require_same_dimension(params.n, x.size(), "fm_evaluate");
  double linear = 0.0;
  for (std::size_t i = 0; i < params.n; ++i) {
    if (x[i]) linear += params.omega[i];
  }
  // sum_{i<j} <v_i,v_j> x_i x_j = 1/2 sum_f [(sum_i v_if x_i)^2 - sum_i v_if^2 x_i^2]
  double quad = 0.0;
  for (std::size_t f = 0; f < params.k; ++f) {
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < params.n; ++i) {
      if (x[i]) {
        const double value = params.v[i * params.k + f];
        s += value;
        s2 += value * value;
      }
    }
    quad += s * s - s2;
  }
  return params.omega0 + linear + 0.5 * quad;
}

FmParams init_params(std::size_t n, std::size_t k, Rng& rng) {
  if (n < 2) {
    throw Error(ErrorKind::InvalidArgument,
                "init_params: n must be >= 2, got " + std::to_string(n));
  }
  if (k < 1) {
    throw Error(ErrorKind::InvalidArgument, "init_params: k must be >= 1");
  }
  const double l1 = std::sqrt(6.0 / static_cast<double>(n));
  const double l2 = std::pow(
      72.0 / (static_cast<double>(k) * static_cast<double>(n) * static_cast<double>(n - 1)),
      0.25);

  FmParams params;
  params.n = n;
  params.k = k;
  params.omega0 = 0.0;
  params.omega.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    params.omega[i] = rng.uniform(-l1, l1);
  }
  params.v.resize(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      params.v[i * k + f] = rng.uniform(-l2, l2);
    }
  }
  return params;
}

Qubo export_qubo(const FmParams& params) {
  if (params.n == 0 || params.omega.size() != params.n ||
      params.v.size() != params.n * params.k) {
    throw Error(ErrorKind::InvalidArgument, "export_qubo: malformed FmParams");
  }
  Qubo q(params.n);
  q.set_constant(params.omega0);
  for (std::size_t i = 0; i < params.n; ++i) {
    q.set(i, i, params.omega[i]);
    for (std::size_t j = i + 1; j < params.n; ++j) {
      double dot = 0.0;
      for (std::size_t f = 0; f < params.k; ++f) {
        dot += params.v[i * params.k + f] * params.v[j * params.k + f];
      }
      q.set(i, j, dot);
    }
  }
  return q;
}

double qubo_evaluate(const Qubo& q, const BinaryVector& x) {
  require_same_dimension(q.size(), x.size(), "qubo_evaluate");
  double total = q.constant();
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!x[i]) continue;
    total += q.at(i, i);
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      if (x[j]) total += q.at(i, j);
    }
  }
  return total;
}

}  // namespace fmopt
