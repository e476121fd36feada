#include <catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "cyclat/error.hpp"
#include "cyclat/io.hpp"
#include "support.hpp"

using namespace cyclat;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "cyclat_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("number formatting round-trips", "[io]") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(gen) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    REQUIRE(io::parse_double(io::format_double(x), "x") == x);
  }
  CHECK(io::format_double(0.001) == "0.001");
  CHECK_THROWS_AS(io::parse_double("1.0x", "x"), ConfigError);
  CHECK_THROWS_AS(io::parse_double("", "x"), ConfigError);
  CHECK_THROWS_AS(io::parse_integer<std::int64_t>("3.5", "n"), ConfigError);
}

TEST_CASE("config defaults and parsing", "[io][config]") {
  const io::RunConfig defaults;
  CHECK(defaults.n_sites == 801);
  CHECK(defaults.lattice_constant == 1.0);
  CHECK(defaults.evolution.tau == 1e-3);
  CHECK(defaults.n_steps == 1000);
  CHECK(defaults.record_every == 10);

  const io::RunConfig c = io::parse_config(
      "# comment\n"
      "n_sites = 101   # trailing comment\n"
      "\n"
      "  shape=uniform\n"
      "width = 12\n"
      "scheme = exact\n"
      "tau = 2.5e-3\n"
      "csv_path = out/run.csv\n");
  CHECK(c.n_sites == 101);
  CHECK(c.state.shape == Shape::uniform);
  CHECK(c.state.width == 12.0);
  CHECK(c.evolution.scheme == Scheme::exact);
  CHECK(c.evolution.tau == 2.5e-3);
  CHECK(c.csv_path == "out/run.csv");
  CHECK(c.n_steps == 1000);

  CHECK_THROWS_AS(io::parse_config("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("n_sites\n"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("n_sites = many\n"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("shape = square\n"), ConfigError);
}

TEST_CASE("config round-trips through its text form", "[io][config][property]") {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> real(1e-4, 50.0);
  std::uniform_int_distribution<std::int64_t> integer(-1000, 1000);
  for (int trial = 0; trial < 200; ++trial) {
    io::RunConfig c;
    c.n_sites = 2 * std::abs(integer(gen)) + 3;
    c.lattice_constant = real(gen);
    c.state.shape = static_cast<Shape>(pick(gen));
    c.state.center = integer(gen);
    c.state.width = real(gen);
    c.state.velocity_index = integer(gen);
    c.state.seed = gen();
    c.evolution.scheme = pick(gen) == 0 ? Scheme::exact : Scheme::euler;
    c.evolution.tau = real(gen) * 1e-4;
    c.evolution.parity_mode = pick(gen) == 0 ? ParityMode::even_naive : ParityMode::odd_standard;
    c.n_steps = std::abs(integer(gen));
    c.record_every = std::abs(integer(gen)) + 1;
    c.checkpoint_every = std::abs(integer(gen));
    c.csv_path = trial % 2 ? "runs/out_" + std::to_string(trial) + ".csv" : "";
    c.json_path = "series.json";
    c.checkpoint_prefix = trial % 3 ? "cp" : "";
    c.initial_state_path = trial % 5 ? "" : "psi.csv";
    REQUIRE(io::parse_config(io::serialize_config(c)) == c);
  }
}

TEST_CASE("lattice_for enforces the parity mode", "[io][config]") {
  io::RunConfig c;
  CHECK(io::lattice_for(c).n_sites() == 801);
  c.n_sites = 800;
  CHECK_THROWS_AS(io::lattice_for(c), ConfigError);
  c.evolution.parity_mode = ParityMode::even_naive;
  CHECK_FALSE(io::lattice_for(c).is_odd());
  c.n_sites = 801;
  CHECK_THROWS_AS(io::lattice_for(c), ConfigError);
}

TEST_CASE("time series CSV layout", "[io][csv]") {
  const Lattice lat = make_lattice(101, 1.0);
  const TimeSeries series = run(gaussian_state(lat, 0, 5.0, 2), EvolutionConfig{}, 100, 10);
  const std::string csv = io::time_series_csv(series);
  CHECK(csv.rfind(std::string(io::kTimeSeriesHeader) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  CHECK(csv == io::time_series_csv(run(gaussian_state(lat, 0, 5.0, 2), EvolutionConfig{}, 100, 10)));

  const auto j = nlohmann::json::parse(io::time_series_json(series, io::RunConfig{}));
  CHECK(j.at("snapshots").size() == 11);
  CHECK(j.at("snapshots")[10].at("step") == 100);
  CHECK(j.at("config").at("n_sites") == 801);
}

TEST_CASE("state files round-trip exactly", "[io][state][property]") {
  for (std::int64_t n : {3, 21, 801}) {
    const Lattice lat = make_lattice(n, 0.5);
    const FieldState s = normalize(test::random_unnormalized(lat, static_cast<std::uint64_t>(n)));
    REQUIRE(io::parse_state_csv(io::state_csv(s), 0.5) == s);
    REQUIRE(io::parse_state_json(io::state_json(s)) == s);
  }
  const Lattice even = make_even_lattice(6, 1.0);
  const FieldState e = test::random_unnormalized(even, 2);
  CHECK(io::parse_state_csv(io::state_csv(e), 1.0) == e);
  CHECK(io::parse_state_json(io::state_json(e)) == e);

  const FieldState tiny(make_lattice(3, 1.0), {0.5, -1.0, 0.0}, {0.0, 0.25, 1e-300});
  CHECK(io::state_csv(tiny) == "site,a,b\n-1,0.5,0\n0,-1,0.25\n1,0,1e-300\n");
}

TEST_CASE("malformed state files are rejected", "[io][state][errors]") {
  CHECK_THROWS_AS(io::parse_state_csv("s,a,b\n", 1.0), ConfigError);
  CHECK_THROWS_AS(io::parse_state_csv("site,a,b\n-1,0,0\n0,1\n1,0,0\n", 1.0), ConfigError);
  CHECK_THROWS_AS(io::parse_state_csv("site,a,b\n0,0,0\n1,1,0\n2,0,0\n", 1.0), ConfigError);
  CHECK_THROWS_AS(io::parse_state_json("{\"site\": [0]}"), ConfigError);
  CHECK_THROWS_AS(io::parse_state_json("not json"), ConfigError);
}

TEST_CASE("files are written atomically and loaded by extension", "[io][files]") {
  const auto dir = scratch_dir();
  const FieldState s = normalize(test::random_unnormalized(make_lattice(5, 1.0), 3));
  const std::string csv_path = (dir / "state.csv").string();
  const std::string json_path = (dir / "state.json").string();
  io::write_file_atomic(csv_path, io::state_csv(s));
  io::write_file_atomic(json_path, io::state_json(s));
  CHECK_FALSE(std::filesystem::exists(csv_path + ".tmp"));
  CHECK(io::load_state(csv_path, 1.0) == s);
  CHECK(io::load_state(json_path, 1.0) == s);
  io::write_file_atomic(csv_path, "replaced");
  CHECK(io::read_file(csv_path) == "replaced");
  CHECK_THROWS_AS(io::read_file((dir / "missing.csv").string()), ConfigError);
}

TEST_CASE("report serialization", "[io][report]") {
  ExperimentReport r;
  r.scenario = "demo";
  r.parameters = {{"tau", 1e-3}};
  r.metrics = {{"value", 0.25}};
  r.checks = {check_below("value small", 0.25, 1.0), make_check("value in band", 0.25, 0.5, 1.0)};
  const auto j = nlohmann::json::parse(io::reports_json({r}));
  REQUIRE(j.size() == 1);
  CHECK(j[0].at("scenario") == "demo");
  CHECK(j[0].at("passed") == false);
  const std::string text = io::report_text(r);
  CHECK(text.find("demo") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
}
