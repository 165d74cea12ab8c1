#include "fmopt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "fmopt/errors.hpp"
#include "fmopt/labs.hpp"
#include "fmopt/reference.hpp"

namespace fmopt::harness {

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::DLatest: return "d_latest";
    case SweepAxis::K: return "k";
    case SweepAxis::DInit: return "d_init";
    case SweepAxis::N: return "n";
  }
  return "?";
}

SweepAxis axis_from_string(std::string_view text) {
  if (text == "d_latest") return SweepAxis::DLatest;
  if (text == "k") return SweepAxis::K;
  if (text == "d_init") return SweepAxis::DInit;
  if (text == "n") return SweepAxis::N;
  throw Error(ErrorKind::Config,
              "axis: expected d_latest, k, d_init or n, got '" + std::string(text) + "'");
}

namespace {

std::string trim_copy(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim_copy(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_axis_number(SweepAxis axis, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::Config, std::string(axis_name(axis)) + " value '" + value +
                                       "' is not a nonnegative integer");
  }
  return out;
}

}  // namespace

void SweepSpec::validate() const {
  if (values.empty()) throw Error(ErrorKind::Config, "sweep: values must be nonempty");
  if (seeds.empty()) throw Error(ErrorKind::Config, "sweep: seeds must be nonempty");
  if (output_dir.empty()) throw Error(ErrorKind::Config, "sweep: output_dir must be set");
  for (const std::string& value : values) {
    if (value == "all") {
      if (axis != SweepAxis::DLatest) {
        throw Error(ErrorKind::Config, "sweep: 'all' is only meaningful on the d_latest axis");
      }
      continue;
    }
    const std::uint64_t number = parse_axis_number(axis, value);
    switch (axis) {
      case SweepAxis::DLatest:
      case SweepAxis::K:
      case SweepAxis::DInit:
        if (number < 1) {
          throw Error(ErrorKind::Config,
                      std::string(axis_name(axis)) + " value must be >= 1, got " + value);
        }
        break;
      case SweepAxis::N:
        if (number < 2) {
          throw Error(ErrorKind::Config, "n value must be >= 2, got " + value);
        }
        break;
    }
  }
}

SweepSpec parse_sweep_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Config, "cannot open sweep spec '" + path.string() + "'");
  }
  SweepSpec spec;
  bool have_axis = false;
  std::ostringstream config_text;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim_copy(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    const std::string key = (eq == std::string::npos) ? body : trim_copy(body.substr(0, eq));
    const std::string value = (eq == std::string::npos) ? "" : trim_copy(body.substr(eq + 1));
    if (key == "axis") {
      spec.axis = axis_from_string(value);
      have_axis = true;
    } else if (key == "values") {
      spec.values = split_list(value);
    } else if (key == "seeds") {
      for (const std::string& item : split_list(value)) {
        std::uint64_t seed = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), seed);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
          throw Error(ErrorKind::Config, path.string() + ":" + std::to_string(line_no) +
                                             ": bad seed '" + item + "'");
        }
        spec.seeds.push_back(seed);
      }
    } else if (key == "output_dir") {
      spec.output_dir = value;
    } else {
      config_text << line << "\n";
    }
  }
  if (!have_axis) {
    throw Error(ErrorKind::Config, path.string() + ": missing 'axis'");
  }
  std::istringstream config_in(config_text.str());
  spec.base = parse_config_text(config_in, path.string());
  spec.validate();
  return spec;
}

namespace {

struct SweepJob {
  RunSetup setup;
  std::optional<double> optimum;
  SweepCellMeta meta;
  std::filesystem::path file;
};

RunSetup cell_setup(const SweepSpec& spec, const std::string& value, Seed seed) {
  RunSetup setup = spec.base;
  setup.config.seed = seed;
  switch (spec.axis) {
    case SweepAxis::DLatest:
      setup.config.policy = (value == "all")
                                ? DatasetPolicy::conventional()
                                : DatasetPolicy::fifo(parse_axis_number(spec.axis, value));
      break;
    case SweepAxis::K:
      setup.config.k = parse_axis_number(spec.axis, value);
      break;
    case SweepAxis::DInit:
      setup.config.d_init = parse_axis_number(spec.axis, value);
      break;
    case SweepAxis::N:
      setup.config.n = parse_axis_number(spec.axis, value);
      break;
  }
  return setup;
}

std::filesystem::path cell_file(const SweepSpec& spec, const SweepCellMeta& meta) {
  std::string name = std::string(axis_name(spec.axis)) + "_" + meta.value + "__seed_" +
                     std::to_string(meta.seed);
  if (meta.role == "baseline") name += "__baseline";
  name += ".jsonl";
  return spec.output_dir / name;
}

double value_sort_key(const std::string& value) {
  if (value == "all" || value == "-") return std::numeric_limits<double>::infinity();
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

AggregateStats aggregate_summaries(std::vector<StoredSummary> summaries) {
  AggregateStats stats;

  // Canonical order so that parallel sweeps, re-globbed files and repeated
  // aggregation all sum in the same sequence.
  std::sort(summaries.begin(), summaries.end(), [](const StoredSummary& a, const StoredSummary& b) {
    const std::string va = a.meta ? a.meta->value : "-";
    const std::string vb = b.meta ? b.meta->value : "-";
    if (va != vb) {
      const double ka = value_sort_key(va), kb = value_sort_key(vb);
      if (ka != kb) return ka < kb;
      return va < vb;
    }
    const std::string ra = a.meta ? a.meta->role : "cell";
    const std::string rb = b.meta ? b.meta->role : "cell";
    if (ra != rb) return ra < rb;  // baseline before cell; irrelevant to sums
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.file.string() < b.file.string();
  });

  for (const StoredSummary& s : summaries) {
    if (s.meta && !stats.axis.empty() && s.meta->axis != stats.axis) {
      throw Error(ErrorKind::Io, "aggregate: records from different sweep axes ('" + stats.axis +
                                     "' vs '" + s.meta->axis + "')");
    }
    if (s.meta && stats.axis.empty()) stats.axis = s.meta->axis;
  }
  if (stats.axis.empty()) stats.axis = "-";

  // Matched-seed baselines: the `all` cell on the d_latest axis, the
  // conventional twin elsewhere.
  std::map<std::pair<std::string, Seed>, double> baseline_by_value_seed;
  std::map<Seed, double> baseline_all;
  for (const StoredSummary& s : summaries) {
    if (s.incomplete || !s.meta) continue;
    if (s.meta->role == "baseline") {
      baseline_by_value_seed[{s.meta->value, s.seed}] = s.best_objective;
    }
    if (stats.axis == "d_latest" && s.meta->value == "all" && s.meta->role == "cell") {
      baseline_all[s.seed] = s.best_objective;
    }
  }

  struct Group {
    std::vector<double> residuals;
    std::vector<double> rates;
    std::size_t cells = 0;
  };
  std::map<std::string, Group> groups;
  std::vector<std::string> group_order;

  for (const StoredSummary& s : summaries) {
    if (s.meta && s.meta->role == "baseline") continue;
    if (s.incomplete) {
      ++stats.failed_cells;
      continue;
    }
    const std::string value = s.meta ? s.meta->value : "-";
    auto [it, inserted] = groups.try_emplace(value);
    if (inserted) group_order.push_back(value);
    Group& group = it->second;
    ++group.cells;
    group.residuals.push_back(s.final_residual ? *s.final_residual
                                               : std::numeric_limits<double>::quiet_NaN());
    const double* baseline = nullptr;
    if (s.meta) {
      if (stats.axis == "d_latest") {
        auto found = baseline_all.find(s.seed);
        if (found != baseline_all.end()) baseline = &found->second;
      } else {
        auto found = baseline_by_value_seed.find({value, s.seed});
        if (found != baseline_by_value_seed.end()) baseline = &found->second;
      }
    }
    if (baseline && *baseline != 0.0) {
      group.rates.push_back(improvement_rate(s.best_objective, *baseline));
    }
  }

  for (const std::string& value : group_order) {
    const Group& group = groups.at(value);
    AggregateRow row;
    row.axis_value = value;
    row.cells = group.cells;
    double sum = 0.0;
    for (double r : group.residuals) sum += r;
    const double mean = sum / static_cast<double>(group.residuals.size());
    double var = 0.0;
    for (double r : group.residuals) var += (r - mean) * (r - mean);
    var /= static_cast<double>(group.residuals.size());
    row.mean_residual = mean;
    row.std_residual = std::sqrt(var);
    if (group.rates.empty()) {
      row.mean_improvement_rate = std::numeric_limits<double>::quiet_NaN();
    } else {
      double rate_sum = 0.0;
      for (double r : group.rates) rate_sum += r;
      row.mean_improvement_rate = rate_sum / static_cast<double>(group.rates.size());
    }
    stats.rows.push_back(std::move(row));
  }
  return stats;
}

std::string render_stats_csv(const AggregateStats& stats) {
  std::ostringstream out;
  out << "# aggregate statistics over matched seeds\n";
  out << "# axis: " << stats.axis << "\n";
  out << "# std_residual: population standard deviation\n";
  out << "# improvement rate: (V_value - V_baseline) / V_baseline per matched seed\n";
  out << "# failed_cells: " << stats.failed_cells << "\n";
  out << "axis_value,mean_residual,std_residual,mean_improvement_rate\n";
  for (const AggregateRow& row : stats.rows) {
    out << row.axis_value << "," << format_double(row.mean_residual) << ","
        << format_double(row.std_residual) << "," << format_double(row.mean_improvement_rate)
        << "\n";
  }
  return out.str();
}

unsigned worker_count() {
  if (const char* env = std::getenv("FMA_THREADS")) {
    unsigned out = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec == std::errc{} && ptr == text.data() + text.size() && out >= 1) {
      return out;
    }
    throw Error(ErrorKind::Config, "FMA_THREADS: expected a positive integer");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  std::filesystem::create_directories(spec.output_dir);

  const bool needs_twin =
      spec.axis != SweepAxis::DLatest && spec.base.config.policy.kind == PolicyKind::Fifo;

  std::vector<SweepJob> jobs;
  for (const std::string& value : spec.values) {
    for (Seed seed : spec.seeds) {
      SweepJob job;
      job.setup = cell_setup(spec, value, seed);
      job.meta = SweepCellMeta{axis_name(spec.axis), value, seed, "cell"};
      job.file = cell_file(spec, job.meta);
      jobs.push_back(std::move(job));
      if (needs_twin) {
        SweepJob twin;
        twin.setup = cell_setup(spec, value, seed);
        twin.setup.config.policy = DatasetPolicy::conventional();
        twin.meta = SweepCellMeta{axis_name(spec.axis), value, seed, "baseline"};
        twin.file = cell_file(spec, twin.meta);
        jobs.push_back(std::move(twin));
      }
    }
  }

  // Resolve reference optima up front: when n is the axis a user-supplied
  // optimum cannot apply across cells, so built-in references are used.
  for (SweepJob& job : jobs) {
    const std::optional<double> user =
        (spec.axis == SweepAxis::N) ? std::nullopt : spec.base.optimum;
    job.optimum = reference_optimum(job.setup.config.n, user);
  }

  const BlackBox bb = [](const BinaryVector& x) { return labs::labs_objective(x); };

  std::vector<RunRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        records[i] = run_fma(jobs[i].setup.config, bb, jobs[i].optimum);
      } catch (const Error& e) {
        // Config-level failure: synthesize an empty incomplete record so the
        // cell is visible in the output directory.
        records[i].config = jobs[i].setup.config;
        records[i].rng_identity = std::string(Rng::kIdentity);
        records[i].incomplete = true;
        records[i].error = e.what();
      }
    }
  };
  const unsigned pool = std::max(1u, std::min<unsigned>(threads, jobs.size()));
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < pool; ++t) workers.emplace_back(worker);
  for (auto& t : workers) t.join();

  SweepResult result;
  std::vector<StoredSummary> summaries;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    write_record_file(jobs[i].file, records[i], jobs[i].setup, jobs[i].meta);
    result.record_files.push_back(jobs[i].file);
    StoredSummary summary;
    summary.file = jobs[i].file;
    summary.best_objective = records[i].best_objective;
    summary.final_residual = records[i].final_residual;
    summary.bb_calls_total = records[i].bb_calls_total;
    summary.seed = records[i].config.seed;
    summary.incomplete = records[i].incomplete;
    summary.meta = jobs[i].meta;
    summaries.push_back(std::move(summary));
  }

  result.stats = aggregate_summaries(std::move(summaries));
  result.csv_path = spec.output_dir / "aggregate.csv";
  std::ofstream csv(result.csv_path, std::ios::binary);
  if (!csv) {
    throw Error(ErrorKind::Io, "cannot write '" + result.csv_path.string() + "'");
  }
  csv << render_stats_csv(result.stats);
  return result;
}

namespace {

bool wildcard_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0, t = 0;
  std::size_t star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

}  // namespace

std::vector<std::filesystem::path> expand_pattern(const std::string& pattern) {
  namespace fs = std::filesystem;
  std::vector<fs::path> out;
  if (pattern.find('*') == std::string::npos && pattern.find('?') == std::string::npos) {
    if (!fs::exists(pattern)) {
      throw Error(ErrorKind::Io, "no such file: '" + pattern + "'");
    }
    out.emplace_back(pattern);
    return out;
  }
  const fs::path full(pattern);
  const fs::path dir = full.parent_path().empty() ? fs::path(".") : full.parent_path();
  const std::string name_pattern = full.filename().string();
  if (!fs::is_directory(dir)) {
    throw Error(ErrorKind::Io, "no such directory: '" + dir.string() + "'");
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (wildcard_match(name_pattern, entry.path().filename().string())) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });
  return out;
}

}  // namespace fmopt::harness
