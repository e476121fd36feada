// cyclat: command-line driver for the cyclic-lattice reaction process.
//
//   cyclat run          evolve one initial state, write the observable time series
//   cyclat compare      reaction process vs exact propagator, side by side
//   cyclat verify       kernel oracle + exact identity suites
//   cyclat paper-table  the 3 shapes x 3 time steps conservation table
//   cyclat even-odd     even-N naive model vs odd-N model
//
// Exit codes: 0 success, 1 failed check, 2 invalid configuration,
// 3 numerical guard violation.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cyclat/error.hpp"
#include "cyclat/evolution.hpp"
#include "cyclat/experiments.hpp"
#include "cyclat/io.hpp"
#include "cyclat/simulation.hpp"

namespace {

using namespace cyclat;

constexpr int kExitFailedCheck = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitGuard = 3;

// Flags shared by `run` and `compare`; each maps onto a config-file key.
struct RunFlags {
  std::string config_path;
  std::string save_config_path;
  std::map<std::string, std::string> overrides;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key = value configuration file");
  cmd->add_option("--save-config", flags.save_config_path, "write the effective configuration here");
  const std::vector<std::pair<std::string, std::string>> keyed = {
      {"--n-sites", "n_sites"},
      {"--lattice-constant", "lattice_constant"},
      {"--shape", "shape"},
      {"--center", "center"},
      {"--width", "width"},
      {"--velocity-index", "velocity_index"},
      {"--seed", "seed"},
      {"--scheme", "scheme"},
      {"--tau", "tau"},
      {"--parity-mode", "parity_mode"},
      {"--steps", "n_steps"},
      {"--record-every", "record_every"},
      {"--checkpoint-every", "checkpoint_every"},
      {"--checkpoint-prefix", "checkpoint_prefix"},
      {"--csv", "csv_path"},
      {"--json", "json_path"},
      {"--initial-state", "initial_state"},
  };
  for (const auto& [flag, key] : keyed) {
    cmd->add_option_function<std::string>(
        flag, [&flags, key = key](const std::string& v) { flags.overrides[key] = v; },
        "overrides config key '" + key + "'");
  }
}

io::RunConfig resolve_config(const RunFlags& flags) {
  io::RunConfig config;
  if (!flags.config_path.empty()) config = io::parse_config(io::read_file(flags.config_path));
  for (const auto& [key, value] : flags.overrides) io::apply_setting(config, key, value);
  if (!flags.save_config_path.empty()) {
    io::write_file_atomic(flags.save_config_path, io::serialize_config(config));
  }
  return config;
}

FieldState initial_state(const io::RunConfig& config, const Lattice& lattice) {
  if (config.initial_state_path.empty()) return make_state(lattice, config.state);
  FieldState state = io::load_state(config.initial_state_path, config.lattice_constant);
  if (!(state.lattice() == lattice)) {
    throw ConfigError("initial state lattice does not match n_sites / lattice_constant");
  }
  return state;
}

void warn_if_needed(const EvolutionConfig& evolution, const Lattice& lattice) {
  if (const auto warning = validate(evolution, lattice)) std::cerr << "warning: " << *warning << "\n";
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    io::write_file_atomic(path, content);
  }
}

int cmd_run(const RunFlags& flags) {
  const io::RunConfig config = resolve_config(flags);
  const Lattice lattice = io::lattice_for(config);
  warn_if_needed(config.evolution, lattice);
  const FieldState psi = initial_state(config, lattice);
  const TimeSeries series =
      run(psi, config.evolution, config.n_steps, config.record_every, config.checkpoint_every);
  emit(config.csv_path, io::time_series_csv(series));
  if (!config.json_path.empty()) {
    io::write_file_atomic(config.json_path, io::time_series_json(series, config));
  }
  if (!config.checkpoint_prefix.empty()) {
    for (const auto& cp : series.checkpoints) {
      io::write_file_atomic(config.checkpoint_prefix + "_step" + std::to_string(cp.step) + ".csv",
                            io::state_csv(cp.state));
    }
  }
  return 0;
}

int cmd_compare(const RunFlags& flags) {
  const io::RunConfig config = resolve_config(flags);
  const Lattice lattice = io::lattice_for(config);
  if (!lattice.is_odd()) throw ConfigError("compare requires an odd lattice");
  EvolutionConfig euler = config.evolution;
  euler.scheme = Scheme::euler;
  warn_if_needed(euler, lattice);
  if (config.n_steps < 0 || config.record_every < 1) {
    throw ConfigError("compare needs n_steps >= 0 and record_every >= 1");
  }

  const KernelTable kernels = build_kernel_table(lattice);
  FieldState a = initial_state(config, lattice);
  FieldState b = a;
  const double m0 = norm_m(a);
  std::string out = "step,deviation,m_euler,m_exact,drift_velocity_euler,drift_velocity_exact\n";
  const auto record = [&](std::int64_t t) {
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += std::norm(a.coefficient(i) - b.coefficient(i));
    out += std::to_string(t);
    for (double x : {std::sqrt(diff / m0), norm_m(a), norm_m(b), drift_velocity(a, kernels),
                     drift_velocity(b, kernels)}) {
      out += ',';
      out += io::format_double(x);
    }
    out += '\n';
  };
  record(0);
  for (std::int64_t t = 1; t <= config.n_steps; ++t) {
    a = euler_step(a, config.evolution.tau, kernels);
    b = exact_step(b, config.evolution.tau);
    if (t % config.record_every == 0) record(t);
  }
  emit(config.csv_path, out);
  return 0;
}

int report_and_exit(const std::vector<ExperimentReport>& reports, const std::string& json_path) {
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << io::report_text(r);
    ok = ok && r.passed();
  }
  if (!json_path.empty()) io::write_file_atomic(json_path, io::reports_json(reports));
  if (!ok) {
    std::cout << "\nfailed checks:\n";
    for (const auto& r : reports) {
      for (const auto& c : r.checks) {
        if (!c.passed) std::cout << "  " << r.scenario << ": " << c.name << "\n";
      }
    }
  }
  return ok ? 0 : kExitFailedCheck;
}

struct VerifyFlags {
  std::int64_t max_n = 21;
  int states = 50;
  double kernel_perturbation = 0.0;
  std::string json_path;
};

int cmd_verify(const VerifyFlags& flags) {
  if (flags.max_n < 3) throw ConfigError("--max-n must be at least 3");
  std::vector<std::int64_t> identity_ns;
  for (std::int64_t n = 3; n <= flags.max_n; n += 2) identity_ns.push_back(n);
  std::vector<ExperimentReport> reports;
  reports.push_back(kernel_oracle_suite({3, 5, 7, 21, 101, 801}, flags.kernel_perturbation));
  reports.push_back(identity_suite(identity_ns, flags.states));
  return report_and_exit(reports, flags.json_path);
}

struct TableFlags {
  std::int64_t steps = 1000;
  std::uint64_t seed = 42;
  std::string json_path;
  std::string text_path;
};

int cmd_paper_table(const TableFlags& flags) {
  if (flags.steps < 0) throw ConfigError("--steps must be nonnegative");
  const auto rows = paper_table(flags.steps, flags.seed);
  std::ostringstream text;
  text << std::left << std::setw(10) << "shape" << std::setw(8) << "tau" << std::setw(14)
       << "M var" << std::setw(14) << "<V> var" << std::setw(14) << "band" << "result\n";
  bool ok = true;
  for (const auto& r : rows) {
    const std::string shape = r.scenario.substr(r.scenario.find('/') + 1,
                                                r.scenario.rfind('/') - r.scenario.find('/') - 1);
    const double tau = *r.parameter("tau");
    std::string band = "-";
    std::string result = "n/a";
    if (!r.checks.empty()) {
      band = io::bound_text(r.checks.back());
      if (r.checks.back().name.find("ratio") != std::string::npos) band = "ratio " + band;
      result = r.passed() ? "pass" : "FAIL";
    }
    ok = ok && r.passed();
    text << std::left << std::setw(10) << shape << std::setw(8) << tau << std::setw(14)
         << std::setprecision(4) << *r.metric("m_variation") << std::setw(14)
         << *r.metric("v_variation") << std::setw(14) << band << result << "\n";
  }
  std::cout << text.str();
  if (!flags.text_path.empty()) io::write_file_atomic(flags.text_path, text.str());
  if (!flags.json_path.empty()) io::write_file_atomic(flags.json_path, io::reports_json(rows));
  return ok ? 0 : kExitFailedCheck;
}

struct EvenOddFlags {
  std::int64_t n_even = 800;
  std::int64_t n_odd = 801;
  double sigma = 5.0;
  std::int64_t steps = 100;
  double tau = 1e-3;
  std::string json_path;
};

int cmd_even_odd(const EvenOddFlags& f) {
  return report_and_exit({even_odd_comparison(f.n_even, f.n_odd, f.sigma, f.steps, f.tau)},
                         f.json_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic-lattice two-field reaction process for a quantum free particle"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "evolve an initial state and record observables");
  add_run_flags(run_cmd, run_flags);

  RunFlags compare_flags;
  auto* compare_cmd = app.add_subcommand("compare", "reaction process vs exact propagator");
  add_run_flags(compare_cmd, compare_flags);

  VerifyFlags verify_flags;
  auto* verify_cmd = app.add_subcommand("verify", "kernel oracle and exact identity suites");
  verify_cmd->add_option("--max-n", verify_flags.max_n, "largest odd N for the identity suite");
  verify_cmd->add_option("--states", verify_flags.states, "random states per lattice");
  verify_cmd->add_option("--json", verify_flags.json_path, "write the reports as JSON");
  verify_cmd->add_option("--inject-kernel-perturbation", verify_flags.kernel_perturbation,
                         "testing hook: offset added to the closed-form kernels")
      ->group("Testing");

  TableFlags table_flags;
  auto* table_cmd = app.add_subcommand("paper-table", "3 shapes x 3 time steps conservation table");
  table_cmd->add_option("--steps", table_flags.steps, "steps per run");
  table_cmd->add_option("--seed", table_flags.seed, "seed of the random state");
  table_cmd->add_option("--json", table_flags.json_path, "write the reports as JSON");
  table_cmd->add_option("--text", table_flags.text_path, "write the table as text");

  EvenOddFlags eo_flags;
  auto* eo_cmd = app.add_subcommand("even-odd", "even-N naive model vs odd-N model");
  eo_cmd->add_option("--n-even", eo_flags.n_even, "even lattice size");
  eo_cmd->add_option("--n-odd", eo_flags.n_odd, "odd lattice size");
  eo_cmd->add_option("--sigma", eo_flags.sigma, "gaussian width (sites)");
  eo_cmd->add_option("--steps", eo_flags.steps, "reaction steps");
  eo_cmd->add_option("--tau", eo_flags.tau, "time step");
  eo_cmd->add_option("--json", eo_flags.json_path, "write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags);
    if (*compare_cmd) return cmd_compare(compare_flags);
    if (*verify_cmd) return cmd_verify(verify_flags);
    if (*table_cmd) return cmd_paper_table(table_flags);
    if (*eo_cmd) return cmd_even_odd(eo_flags);
  } catch (const NumericalGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailedCheck;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  return 0;
}
