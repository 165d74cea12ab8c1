#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  const std::string command = std::string(FMA_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("fmopt_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

const char* kTinyRun =
    "--set n=6 --set k=2 --set d_init=4 --set d_reads=3 --set d_adds=1 "
    "--set n_iter=2 --set epochs=20 --set outer_loops=10 --set inner_loops=2";

}  // namespace

TEST_CASE("oracle labs: reference values and timing output") {
  const CliResult r3 = run_cli("oracle labs --n 3");
  CHECK(r3.exit_code == 0);
  CHECK(r3.output.find("energy = 1\n") != std::string::npos);
  CHECK(r3.output.find("merit_factor = 4.5\n") != std::string::npos);
  CHECK(r3.output.find("wall_time_s = ") != std::string::npos);

  const CliResult r2 = run_cli("oracle labs --n 2");
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("energy = 1\n") != std::string::npos);
}

TEST_CASE("oracle labs beyond the budget exits 4") {
  const CliResult r = run_cli("oracle labs --n 30");
  CHECK(r.exit_code == 4);
  CHECK(r.output.find("budget") != std::string::npos);
}

TEST_CASE("run: missing config file exits 2") {
  const CliResult r = run_cli("run --config /nonexistent/base.cfg");
  CHECK(r.exit_code == 2);
}

TEST_CASE("run: invalid settings exit 2 with the field name") {
  const CliResult r = run_cli("run --set d_adds=20 --set d_reads=5");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("d_adds") != std::string::npos);
  CHECK(run_cli("run --set nope=1").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("run: tiny run writes a record and reports the result") {
  const fs::path dir = temp_dir("run");
  const fs::path record = dir / "record.jsonl";
  const CliResult ok = run_cli("run " + std::string(kTinyRun) + " --output " + record.string());
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("best_objective = ") != std::string::npos);
  CHECK(ok.output.find("residual = ") != std::string::npos);
  CHECK(fs::exists(record));
  CHECK(line_count(slurp(record)) == 3);  // 2 trace rows + summary
}

TEST_CASE("run: fifo policy caps the dumped dataset") {
  const fs::path dir = temp_dir("dump");
  const fs::path record = dir / "record.jsonl";
  const fs::path dump = dir / "dataset.txt";
  const CliResult r = run_cli("run " + std::string(kTinyRun) +
                              " --set policy=fifo:3 --output " + record.string() +
                              " --dump-dataset " + dump.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dump));
  CHECK(line_count(slurp(dump)) <= 3);
}

TEST_CASE("run: a wrong user optimum aborts with exit 3 and a partial record") {
  const fs::path dir = temp_dir("badopt");
  const fs::path record = dir / "record.jsonl";
  const CliResult r = run_cli("run " + std::string(kTinyRun) +
                              " --set optimum=-0.000001 --output " + record.string());
  CHECK(r.exit_code == 3);
  CHECK(fs::exists(record));
  CHECK(slurp(record).find("\"incomplete\":true") != std::string::npos);
}

TEST_CASE("config file + overrides round trip through the CLI") {
  const fs::path dir = temp_dir("config");
  const fs::path cfg = dir / "base.cfg";
  {
    std::ofstream out(cfg);
    out << "n = 6\nk = 2\nd_init = 4\nd_reads = 3\nd_adds = 1\nn_iter = 2\n";
    out << "epochs = 20\nouter_loops = 10\ninner_loops = 2\npolicy = fifo:5\n";
  }
  const fs::path record = dir / "record.jsonl";
  const CliResult r = run_cli("run --config " + cfg.string() + " --set seed=9 --output " +
                              record.string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(record).find("\"policy\":\"fifo:5\"") != std::string::npos);
  CHECK(slurp(record).find("\"seed\":\"9\"") != std::string::npos);
}

TEST_CASE("anneal solves a qubo file and prints sorted reads") {
  const fs::path dir = temp_dir("anneal");
  const fs::path qubo = dir / "q.txt";
  {
    std::ofstream out(qubo);
    out << "n 2\nc 0\n0 0 -1\n1 1 2\n";
  }
  const CliResult r = run_cli("anneal --input " + qubo.string() +
                              " --reads 4 --outer-loops 50 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find(" -1 10\n") != std::string::npos);

  const CliResult oracle = run_cli("oracle qubo --input " + qubo.string());
  CHECK(oracle.exit_code == 0);
  CHECK(oracle.output.find("energy = -1\n") != std::string::npos);
  CHECK(oracle.output.find("optimizer = 10\n") != std::string::npos);
}

TEST_CASE("sweep then stats: idempotent aggregates through the CLI") {
  const fs::path dir = temp_dir("sweep");
  const fs::path spec = dir / "sweep.cfg";
  const fs::path out_dir = dir / "out";
  {
    std::ofstream out(spec);
    out << "n = 6\nk = 2\nd_init = 4\nd_reads = 3\nd_adds = 1\nn_iter = 2\n";
    out << "epochs = 20\nouter_loops = 10\ninner_loops = 2\n";
    out << "axis = d_latest\nvalues = 2, all\nseeds = 1, 2\n";
    out << "output_dir = " << out_dir.string() << "\n";
  }
  const CliResult sweep = run_cli("sweep --spec " + spec.string());
  CHECK(sweep.exit_code == 0);
  CHECK(sweep.output.find("cells = 4") != std::string::npos);
  CHECK(fs::exists(out_dir / "aggregate.csv"));

  const fs::path stats_csv = dir / "stats.csv";
  const CliResult stats = run_cli("stats '" + (out_dir / "*.jsonl").string() + "' --output " +
                                  stats_csv.string());
  CHECK(stats.exit_code == 0);
  CHECK(slurp(stats_csv) == slurp(out_dir / "aggregate.csv"));

  const CliResult single = run_cli("stats " + (out_dir / "d_latest_all__seed_1.jsonl").string());
  CHECK(single.exit_code == 0);
  CHECK(single.output.find("axis_value,mean_residual") != std::string::npos);
}
