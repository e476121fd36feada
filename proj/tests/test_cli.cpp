#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "cyclat_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(CYCLAT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_data_row(const std::string& csv) {
  const auto start = csv.find('\n') + 1;
  return csv.substr(start, csv.find('\n', start) - start);
}

}  // namespace

TEST_CASE("run writes the default time series", "[cli]") {
  const auto out = scratch() / "default.csv";
  REQUIRE(cli("run --csv " + out.string()) == 0);
  const std::string csv = slurp(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);
  CHECK(csv.rfind("step,m_total,", 0) == 0);
}

TEST_CASE("exact and euler runs share the initial row", "[cli]") {
  const auto euler = scratch() / "euler.csv";
  const auto exact = scratch() / "exact.csv";
  REQUIRE(cli("run --steps 20 --scheme euler --csv " + euler.string()) == 0);
  REQUIRE(cli("run --steps 20 --scheme exact --csv " + exact.string()) == 0);
  CHECK(first_data_row(slurp(euler)) == first_data_row(slurp(exact)));
}

TEST_CASE("run output is byte-stable", "[cli]") {
  const auto a = scratch() / "stable_a.csv";
  const auto b = scratch() / "stable_b.csv";
  const std::string common = "run --shape random --seed 5 --steps 50 --n-sites 101 --json ";
  REQUIRE(cli(common + (scratch() / "a.json").string() + " --csv " + a.string()) == 0);
  REQUIRE(cli(common + (scratch() / "b.json").string() + " --csv " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(scratch() / "a.json") == slurp(scratch() / "b.json"));
}

TEST_CASE("config files and saved configs", "[cli]") {
  const auto cfg = scratch() / "run.cfg";
  const auto saved = scratch() / "saved.cfg";
  const auto out1 = scratch() / "cfg1.csv";
  const auto out2 = scratch() / "cfg2.csv";
  {
    std::ofstream f(cfg);
    f << "n_sites = 51\nn_steps = 30\nrecord_every = 5\nshape = uniform\nwidth = 4\n";
  }
  REQUIRE(cli("run --config " + cfg.string() + " --tau 0.002 --save-config " + saved.string() +
              " --csv " + out1.string()) == 0);
  const std::string csv = slurp(out1);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
  REQUIRE(cli("run --config " + saved.string() + " --csv " + out2.string()) == 0);
  CHECK(slurp(out2) == csv);
}

TEST_CASE("checkpoints can seed a new run", "[cli]") {
  const auto prefix = scratch() / "cp";
  REQUIRE(cli("run --n-sites 51 --steps 10 --checkpoint-every 10 --checkpoint-prefix " +
              prefix.string() + " --csv " + (scratch() / "cp.csv").string()) == 0);
  const auto state = scratch() / "cp_step10.csv";
  REQUIRE(fs::exists(state));
  CHECK(cli("run --n-sites 51 --steps 5 --initial-state " + state.string() + " --csv " +
            (scratch() / "resumed.csv").string()) == 0);
  CHECK(cli("run --n-sites 53 --steps 5 --initial-state " + state.string()) == 2);
}

TEST_CASE("run exit codes", "[cli][errors]") {
  CHECK(cli("run --n-sites 800") == 2);
  CHECK(cli("run --n-sites 800 --parity-mode even_naive --steps 10") == 0);
  CHECK(cli("run --shape square") == 2);
  CHECK(cli("run --config /nonexistent/cfg") == 2);
  CHECK(cli("run --bogus-flag") == 2);
  CHECK(cli("run --tau 0.02 --steps 1") == 3);
  CHECK(cli("run --tau 0.005 --steps 1") == 0);
  CHECK(cli("run --scheme exact --tau 0.02 --steps 1") == 0);
}

TEST_CASE("compare subcommand", "[cli]") {
  const auto out = scratch() / "compare.csv";
  REQUIRE(cli("compare --n-sites 101 --steps 20 --record-every 10 --csv " + out.string()) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("step,deviation,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(cli("compare --n-sites 800 --parity-mode even_naive") == 2);
}

TEST_CASE("verify passes and catches a perturbed kernel", "[cli]") {
  CHECK(cli("verify") == 0);
  CHECK(cli("verify --inject-kernel-perturbation 1e-3") == 1);
  const auto log = scratch() / "verify.txt";
  const int status = std::system((std::string(CYCLAT_CLI) +
                                  " verify --inject-kernel-perturbation 1e-3 > " + log.string() +
                                  " 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 1);
  CHECK(slurp(log).find("kernel F closed form vs spectral sum") != std::string::npos);
}

TEST_CASE("paper-table is deterministic", "[cli]") {
  const auto a = scratch() / "table_a.json";
  const auto b = scratch() / "table_b.json";
  CHECK(cli("paper-table --steps 0 --json " + a.string()) == 1);
  const std::string zero = slurp(a);
  CHECK(zero.find("\"max_variation\": 0.0") != std::string::npos);
  CHECK(zero.find("\"max_variation\": 1") == std::string::npos);
  cli("paper-table --steps 30 --seed 42 --json " + a.string());
  cli("paper-table --steps 30 --seed 42 --json " + b.string());
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("even-odd subcommand", "[cli]") {
  CHECK(cli("even-odd --steps 10") == 0);
  CHECK(cli("even-odd --n-even 201 --n-odd 201") == 2);
}
