#include "fmopt/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fmopt/errors.hpp"

namespace fmopt::harness {

std::string policy_to_string(const DatasetPolicy& policy) {
  if (policy.kind == PolicyKind::Conventional) return "conventional";
  return "fifo:" + std::to_string(policy.d_latest);
}

DatasetPolicy policy_from_string(std::string_view text) {
  if (text == "conventional" || text == "all") return DatasetPolicy::conventional();
  if (text.starts_with("fifo:")) {
    const std::string_view rest = text.substr(5);
    std::size_t d = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), d);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || d < 1) {
      throw Error(ErrorKind::Config, "policy: bad fifo cap in '" + std::string(text) + "'");
    }
    return DatasetPolicy::fifo(d);
  }
  throw Error(ErrorKind::Config,
              "policy: expected 'conventional', 'all' or 'fifo:<d>', got '" +
                  std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::Config,
                std::string(key) + ": expected a nonnegative integer, got '" +
                    std::string(value) + "'");
  }
  return out;
}

double parse_f64(std::string_view key, std::string_view value) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(std::string(value), &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config,
                std::string(key) + ": expected a number, got '" + std::string(value) + "'");
  }
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorKind::Config,
              std::string(key) + ": expected true/false, got '" + std::string(value) + "'");
}

void apply_key(RunSetup& setup, std::string_view key, std::string_view value) {
  FmaConfig& cfg = setup.config;
  if (key == "n") {
    cfg.n = parse_u64(key, value);
  } else if (key == "k") {
    cfg.k = parse_u64(key, value);
  } else if (key == "d_init") {
    cfg.d_init = parse_u64(key, value);
  } else if (key == "n_iter") {
    cfg.n_iter = parse_u64(key, value);
  } else if (key == "d_reads") {
    cfg.d_reads = parse_u64(key, value);
  } else if (key == "d_adds") {
    cfg.d_adds = parse_u64(key, value);
  } else if (key == "epochs") {
    cfg.train.epochs = parse_u64(key, value);
  } else if (key == "learning_rate") {
    cfg.train.lr = parse_f64(key, value);
  } else if (key == "adamw_beta1") {
    cfg.train.adamw_beta1 = parse_f64(key, value);
  } else if (key == "adamw_beta2") {
    cfg.train.adamw_beta2 = parse_f64(key, value);
  } else if (key == "adamw_epsilon") {
    cfg.train.adamw_epsilon = parse_f64(key, value);
  } else if (key == "adamw_weight_decay") {
    cfg.train.adamw_weight_decay = parse_f64(key, value);
  } else if (key == "initial_inverse_temperature") {
    cfg.anneal.beta_initial = parse_f64(key, value);
  } else if (key == "final_inverse_temperature") {
    cfg.anneal.beta_final = parse_f64(key, value);
  } else if (key == "annealing_schedule") {
    if (value != "linear") {
      throw Error(ErrorKind::Config, "annealing_schedule: only 'linear' is supported");
    }
    cfg.anneal.schedule = AnnealSchedule::Linear;
  } else if (key == "outer_loops") {
    cfg.anneal.outer_loops = parse_u64(key, value);
  } else if (key == "inner_loops") {
    cfg.anneal.inner_loops = parse_u64(key, value);
  } else if (key == "policy") {
    cfg.policy = policy_from_string(value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "reset_params_each_round") {
    cfg.reset_params_each_round = parse_bool(key, value);
  } else if (key == "seed_init_data") {
    cfg.seed_init_data = parse_u64(key, value);
  } else if (key == "seed_fm_init") {
    cfg.seed_fm_init = parse_u64(key, value);
  } else if (key == "seed_anneal") {
    cfg.seed_anneal = parse_u64(key, value);
  } else if (key == "optimum") {
    setup.optimum = parse_f64(key, value);
  } else {
    throw Error(ErrorKind::Config, "unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

RunSetup parse_config_text(std::istream& in, const std::string& source_name) {
  RunSetup setup;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Config,
                  source_name + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(body.substr(0, eq));
    const std::string_view value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorKind::Config,
                  source_name + ":" + std::to_string(line_no) + ": empty key or value");
    }
    try {
      apply_key(setup, key, value);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config,
                  source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return setup;
}

RunSetup parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Config, "cannot open config file '" + path.string() + "'");
  }
  return parse_config_text(in, path.string());
}

void apply_override(RunSetup& setup, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::Config,
                "override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string_view key = trim(assignment.substr(0, eq));
  const std::string_view value = trim(assignment.substr(eq + 1));
  if (key.empty() || value.empty()) {
    throw Error(ErrorKind::Config, "override '" + std::string(assignment) + "' has an empty side");
  }
  apply_key(setup, key, value);
}

std::vector<std::pair<std::string, std::string>> config_items(const RunSetup& setup) {
  const FmaConfig& cfg = setup.config;
  std::vector<std::pair<std::string, std::string>> items;
  items.emplace_back("n", std::to_string(cfg.n));
  items.emplace_back("k", std::to_string(cfg.k));
  items.emplace_back("d_init", std::to_string(cfg.d_init));
  items.emplace_back("n_iter", std::to_string(cfg.n_iter));
  items.emplace_back("epochs", std::to_string(cfg.train.epochs));
  items.emplace_back("learning_rate", format_double(cfg.train.lr));
  items.emplace_back("adamw_beta1", format_double(cfg.train.adamw_beta1));
  items.emplace_back("adamw_beta2", format_double(cfg.train.adamw_beta2));
  items.emplace_back("adamw_epsilon", format_double(cfg.train.adamw_epsilon));
  items.emplace_back("adamw_weight_decay", format_double(cfg.train.adamw_weight_decay));
  items.emplace_back("initial_inverse_temperature", format_double(cfg.anneal.beta_initial));
  items.emplace_back("final_inverse_temperature", format_double(cfg.anneal.beta_final));
  items.emplace_back("annealing_schedule", "linear");
  items.emplace_back("outer_loops", std::to_string(cfg.anneal.outer_loops));
  items.emplace_back("inner_loops", std::to_string(cfg.anneal.inner_loops));
  items.emplace_back("d_reads", std::to_string(cfg.d_reads));
  items.emplace_back("d_adds", std::to_string(cfg.d_adds));
  items.emplace_back("policy", policy_to_string(cfg.policy));
  items.emplace_back("seed", std::to_string(cfg.seed));
  items.emplace_back("reset_params_each_round", cfg.reset_params_each_round ? "true" : "false");
  if (cfg.seed_init_data) items.emplace_back("seed_init_data", std::to_string(*cfg.seed_init_data));
  if (cfg.seed_fm_init) items.emplace_back("seed_fm_init", std::to_string(*cfg.seed_fm_init));
  if (cfg.seed_anneal) items.emplace_back("seed_anneal", std::to_string(*cfg.seed_anneal));
  if (setup.optimum) items.emplace_back("optimum", format_double(*setup.optimum));
  return items;
}

std::string serialize_config(const RunSetup& setup) {
  std::ostringstream out;
  for (const auto& [key, value] : config_items(setup)) {
    out << key << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace fmopt::harness
