#pragma once

// Run configuration format, time-series / state / report serialization.
//
// Config files are flat `key = value` lines; `#` starts a comment. Numbers in
// every output are written in shortest round-trip form, so re-reading a file
// reproduces the doubles exactly.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "cyclat/error.hpp"
#include "cyclat/evolution.hpp"
#include "cyclat/experiments.hpp"
#include "cyclat/field_state.hpp"
#include "cyclat/simulation.hpp"

namespace cyclat::io {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("invalid number for " + what + ": '" + std::string(text) + "'");
  }
  return value;
}

template <typename Int>
Int parse_integer(std::string_view text, const std::string& what) {
  Int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("invalid integer for " + what + ": '" + std::string(text) + "'");
  }
  return value;
}

// Everything needed to reproduce one `run`. Defaults are the N = 801, a = 1,
// tau = 1e-3, 1000-step headline configuration.
struct RunConfig {
  std::int64_t n_sites = 801;
  double lattice_constant = 1.0;
  StateSpec state{};
  EvolutionConfig evolution{};
  std::int64_t n_steps = 1000;
  std::int64_t record_every = 10;
  std::int64_t checkpoint_every = 0;
  std::string csv_path;
  std::string json_path;
  std::string checkpoint_prefix;
  std::string initial_state_path;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "# cyclat run configuration\n";
  out << "n_sites = " << c.n_sites << "\n";
  out << "lattice_constant = " << format_double(c.lattice_constant) << "\n";
  out << "shape = " << to_string(c.state.shape) << "\n";
  out << "center = " << c.state.center << "\n";
  out << "width = " << format_double(c.state.width) << "\n";
  out << "velocity_index = " << c.state.velocity_index << "\n";
  out << "seed = " << c.state.seed << "\n";
  out << "scheme = " << to_string(c.evolution.scheme) << "\n";
  out << "tau = " << format_double(c.evolution.tau) << "\n";
  out << "parity_mode = " << to_string(c.evolution.parity_mode) << "\n";
  out << "n_steps = " << c.n_steps << "\n";
  out << "record_every = " << c.record_every << "\n";
  out << "checkpoint_every = " << c.checkpoint_every << "\n";
  out << "csv_path = " << c.csv_path << "\n";
  out << "json_path = " << c.json_path << "\n";
  out << "checkpoint_prefix = " << c.checkpoint_prefix << "\n";
  out << "initial_state = " << c.initial_state_path << "\n";
  return out.str();
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Applies one `key = value` setting to `c`.
inline void apply_setting(RunConfig& c, const std::string& key, std::string_view value) {
  if (key == "n_sites") {
    c.n_sites = parse_integer<std::int64_t>(value, key);
  } else if (key == "lattice_constant") {
    c.lattice_constant = parse_double(value, key);
  } else if (key == "shape") {
    c.state.shape = parse_shape(std::string(value));
  } else if (key == "center") {
    c.state.center = parse_integer<std::int64_t>(value, key);
  } else if (key == "width") {
    c.state.width = parse_double(value, key);
  } else if (key == "velocity_index") {
    c.state.velocity_index = parse_integer<std::int64_t>(value, key);
  } else if (key == "seed") {
    c.state.seed = parse_integer<std::uint64_t>(value, key);
  } else if (key == "scheme") {
    c.evolution.scheme = parse_scheme(std::string(value));
  } else if (key == "tau") {
    c.evolution.tau = parse_double(value, key);
  } else if (key == "parity_mode") {
    c.evolution.parity_mode = parse_parity_mode(std::string(value));
  } else if (key == "n_steps") {
    c.n_steps = parse_integer<std::int64_t>(value, key);
  } else if (key == "record_every") {
    c.record_every = parse_integer<std::int64_t>(value, key);
  } else if (key == "checkpoint_every") {
    c.checkpoint_every = parse_integer<std::int64_t>(value, key);
  } else if (key == "csv_path") {
    c.csv_path = std::string(value);
  } else if (key == "json_path") {
    c.json_path = std::string(value);
  } else if (key == "checkpoint_prefix") {
    c.checkpoint_prefix = std::string(value);
  } else if (key == "initial_state") {
    c.initial_state_path = std::string(value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

// Parses a config file body on top of the defaults (or `base`).
inline RunConfig parse_config(std::string_view text, RunConfig base = {}) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(base, std::string(trim(line.substr(0, eq))), trim(line.substr(eq + 1)));
  }
  return base;
}

// Lattice implied by a config. Odd N requires odd_standard, even N requires
// even_naive.
inline Lattice lattice_for(const RunConfig& c) {
  const bool even_mode = c.evolution.parity_mode == ParityMode::even_naive;
  if (c.n_sites % 2 == 0 && !even_mode) {
    throw ConfigError("n_sites = " + std::to_string(c.n_sites) +
                      " is even; the model needs an odd number of sites "
                      "(pass parity_mode = even_naive for the even-N demonstration)");
  }
  if (c.n_sites % 2 != 0 && even_mode) {
    throw ConfigError("parity_mode = even_naive requires an even n_sites");
  }
  return even_mode ? make_even_lattice(c.n_sites, c.lattice_constant)
                   : make_lattice(c.n_sites, c.lattice_constant);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path` via a temporary sibling file and a rename.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw ConfigError("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

inline constexpr std::string_view kTimeSeriesHeader =
    "step,m_total,drift_velocity,momentum_expectation,position_mean,position_spread,shape_residual";

inline std::string time_series_csv(const TimeSeries& series) {
  std::string out(kTimeSeriesHeader);
  out += '\n';
  for (const auto& s : series.snapshots) {
    out += std::to_string(s.step);
    for (double x : {s.m_total, s.drift_velocity, s.momentum_expectation, s.position_mean,
                     s.position_spread, s.shape_residual}) {
      out += ',';
      out += format_double(x);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::json snapshot_json(const ObservableSnapshot& s) {
  return {{"step", s.step},
          {"m_total", s.m_total},
          {"drift_velocity", s.drift_velocity},
          {"momentum_expectation", s.momentum_expectation},
          {"position_mean", s.position_mean},
          {"position_spread", s.position_spread},
          {"shape_residual", s.shape_residual}};
}

inline nlohmann::json config_json(const RunConfig& c) {
  return {{"n_sites", c.n_sites},
          {"lattice_constant", c.lattice_constant},
          {"shape", to_string(c.state.shape)},
          {"center", c.state.center},
          {"width", c.state.width},
          {"velocity_index", c.state.velocity_index},
          {"seed", c.state.seed},
          {"scheme", to_string(c.evolution.scheme)},
          {"tau", c.evolution.tau},
          {"parity_mode", to_string(c.evolution.parity_mode)},
          {"n_steps", c.n_steps},
          {"record_every", c.record_every}};
}

inline std::string time_series_json(const TimeSeries& series, const RunConfig& config) {
  nlohmann::json j;
  j["config"] = config_json(config);
  j["snapshots"] = nlohmann::json::array();
  for (const auto& s : series.snapshots) j["snapshots"].push_back(snapshot_json(s));
  return j.dump(2) + "\n";
}

// State column format: header `site,a,b`, one row per site in ascending order.
inline std::string state_csv(const FieldState& state) {
  std::string out = "site,a,b\n";
  for (std::size_t i = 0; i < state.size(); ++i) {
    out += std::to_string(state.lattice().site_at(i));
    out += ',';
    out += format_double(state.a()[i]);
    out += ',';
    out += format_double(state.b()[i]);
    out += '\n';
  }
  return out;
}

namespace detail {

// Rebuilds the lattice from the first site label: -L for odd rings, -N/2 for
// even ones.
inline Lattice lattice_from_sites(const std::vector<Site>& sites, double lattice_constant) {
  const auto n = static_cast<std::int64_t>(sites.size());
  const Lattice lat = (n % 2 != 0) ? make_lattice(n, lattice_constant)
                                   : make_even_lattice(n, lattice_constant);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] != lat.site_at(i)) {
      throw ConfigError("state rows must list sites " + std::to_string(lat.min_site()) + ".." +
                        std::to_string(lat.max_site()) + " in ascending order");
    }
  }
  return lat;
}

}  // namespace detail

inline FieldState parse_state_csv(std::string_view text, double lattice_constant) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || trim(line) != "site,a,b") {
    throw ConfigError("state CSV must start with the header 'site,a,b'");
  }
  std::vector<Site> sites;
  std::vector<double> a;
  std::vector<double> b;
  while (std::getline(in, line)) {
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto c1 = row.find(',');
    const auto c2 = row.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw ConfigError("state CSV row needs three columns: '" + std::string(row) + "'");
    }
    sites.push_back(parse_integer<Site>(row.substr(0, c1), "site"));
    a.push_back(parse_double(row.substr(c1 + 1, c2 - c1 - 1), "a"));
    b.push_back(parse_double(row.substr(c2 + 1), "b"));
  }
  return FieldState(detail::lattice_from_sites(sites, lattice_constant), std::move(a), std::move(b));
}

inline std::string state_json(const FieldState& state) {
  nlohmann::json j;
  j["n_sites"] = state.lattice().n_sites();
  j["lattice_constant"] = state.lattice().lattice_constant();
  j["parity"] = state.lattice().is_odd() ? "odd" : "even";
  nlohmann::json sites = nlohmann::json::array();
  for (std::size_t i = 0; i < state.size(); ++i) sites.push_back(state.lattice().site_at(i));
  j["site"] = std::move(sites);
  j["a"] = std::vector<double>(state.a().begin(), state.a().end());
  j["b"] = std::vector<double>(state.b().begin(), state.b().end());
  return j.dump(2) + "\n";
}

inline FieldState parse_state_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto sites = j.at("site").get<std::vector<Site>>();
    const Lattice lat = detail::lattice_from_sites(sites, j.at("lattice_constant").get<double>());
    if (j.at("n_sites").get<std::int64_t>() != lat.n_sites()) {
      throw ConfigError("state JSON n_sites does not match the number of sites");
    }
    return FieldState(lat, j.at("a").get<std::vector<double>>(), j.at("b").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed state JSON: ") + e.what());
  }
}

// Loads a state file; `.json` selects the JSON form, anything else is CSV.
inline FieldState load_state(const std::string& path, double lattice_constant) {
  const std::string text = read_file(path);
  if (std::filesystem::path(path).extension() == ".json") return parse_state_json(text);
  return parse_state_csv(text, lattice_constant);
}

inline nlohmann::json report_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["passed"] = r.passed();
  j["parameters"] = nlohmann::json::object();
  for (const auto& p : r.parameters) j["parameters"][p.name] = p.value;
  j["metrics"] = nlohmann::json::object();
  for (const auto& m : r.metrics) j["metrics"][m.name] = m.value;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json cj{{"name", c.name}, {"value", c.value}, {"passed", c.passed}};
    if (std::isfinite(c.lower)) cj["lower"] = c.lower;
    if (std::isfinite(c.upper)) cj["upper"] = c.upper;
    j["checks"].push_back(std::move(cj));
  }
  return j;
}

inline std::string reports_json(const std::vector<ExperimentReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(report_json(r));
  return j.dump(2) + "\n";
}

inline std::string bound_text(const Check& c) {
  std::ostringstream out;
  out << std::setprecision(3);
  const bool lo = std::isfinite(c.lower);
  const bool hi = std::isfinite(c.upper);
  if (lo && hi) {
    out << "[" << c.lower << ", " << c.upper << ")";
  } else if (hi) {
    out << "< " << c.upper;
  } else if (lo) {
    out << ">= " << c.lower;
  }
  return out.str();
}

// Aligned plain-text rendering of a report.
inline std::string report_text(const ExperimentReport& r) {
  std::ostringstream out;
  out << r.scenario << (r.checks.empty() ? "" : (r.passed() ? "  [PASS]" : "  [FAIL]")) << "\n";
  std::size_t width = 0;
  for (const auto& m : r.metrics) width = std::max(width, m.name.size());
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  for (const auto& m : r.metrics) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << m.name << "  "
        << std::setprecision(6) << m.value << "\n";
  }
  for (const auto& c : r.checks) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
        << std::setprecision(6) << c.value << "  " << bound_text(c) << "  "
        << (c.passed ? "pass" : "FAIL") << "\n";
  }
  return out.str();
}

}  // namespace cyclat::io
