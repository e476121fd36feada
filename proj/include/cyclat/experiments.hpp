#pragma once

// Canned, deterministic experiments: the conservation table of the reaction
// process, the tau degradation study, brute-force checks of the kernel
// identities, order-of-accuracy fits, structural invariants, qualitative
// shape evolution and the even/odd lattice comparison.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclat/error.hpp"
#include "cyclat/evolution.hpp"
#include "cyclat/field_state.hpp"
#include "cyclat/lattice.hpp"
#include "cyclat/observables.hpp"

namespace cyclat {

struct Metric {
  std::string name;
  double value = 0.0;

  friend bool operator==(const Metric&, const Metric&) = default;
};

// value must satisfy lower <= value < upper.
struct Check {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool passed = false;

  friend bool operator==(const Check&, const Check&) = default;
};

inline Check make_check(std::string name, double value, double lower, double upper) {
  const bool ok = std::isfinite(value) && value >= lower && value < upper;
  return Check{std::move(name), value, lower, upper, ok};
}

inline Check check_below(std::string name, double value, double upper) {
  return make_check(std::move(name), value, -std::numeric_limits<double>::infinity(), upper);
}

inline Check check_at_least(std::string name, double value, double lower) {
  return make_check(std::move(name), value, lower, std::numeric_limits<double>::infinity());
}

struct ExperimentReport {
  std::string scenario;
  std::vector<Metric> parameters;
  std::vector<Metric> metrics;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  std::optional<double> metric(const std::string& name) const { return find(metrics, name); }
  std::optional<double> parameter(const std::string& name) const { return find(parameters, name); }

  void append(const ExperimentReport& other) {
    metrics.insert(metrics.end(), other.metrics.begin(), other.metrics.end());
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;

 private:
  static std::optional<double> find(const std::vector<Metric>& list, const std::string& name) {
    for (const auto& m : list) {
      if (m.name == name) return m.value;
    }
    return std::nullopt;
  }
};

// Initial states used for the conservation table. The widths and velocities
// are a documented choice; the ring is N = 801, a = 1.
struct TableSetup {
  std::int64_t n_sites = 801;
  double lattice_constant = 1.0;
  double gaussian_sigma = 10.0;
  std::int64_t gaussian_velocity_index = 20;
  std::int64_t uniform_half_width = 40;
  std::int64_t uniform_velocity_index = 10;
  std::int64_t random_velocity_index = 0;
};

inline StateSpec table_state_spec(Shape shape, const TableSetup& setup, std::uint64_t seed) {
  StateSpec spec;
  spec.shape = shape;
  spec.center = 0;
  spec.seed = seed;
  switch (shape) {
    case Shape::gaussian:
      spec.width = setup.gaussian_sigma;
      spec.velocity_index = setup.gaussian_velocity_index;
      break;
    case Shape::uniform:
      spec.width = static_cast<double>(setup.uniform_half_width);
      spec.velocity_index = setup.uniform_velocity_index;
      break;
    case Shape::random:
      spec.width = 1.0;
      spec.velocity_index = setup.random_velocity_index;
      break;
  }
  return spec;
}

struct Variation {
  double m_total = 0.0;
  double drift_velocity = 0.0;
  double max() const { return std::max(m_total, drift_velocity); }
};

inline double relative_change(double x, double x0) {
  if (x == x0) return 0.0;
  return std::abs(x - x0) / std::abs(x0);
}

// Max over steps of |X(t) - X(0)| / |X(0)| for X = M and <V> under the
// reaction process.
inline Variation euler_variation(const FieldState& initial, double tau, std::int64_t n_steps) {
  const KernelTable kernels = build_kernel_table(initial.lattice());
  const double m0 = norm_m(initial);
  const double v0 = drift_velocity(initial, kernels);
  Variation out;
  FieldState state = initial;
  for (std::int64_t t = 0; t < n_steps; ++t) {
    state = euler_step(state, tau, kernels);
    out.m_total = std::max(out.m_total, relative_change(norm_m(state), m0));
    out.drift_velocity = std::max(out.drift_velocity, relative_change(drift_velocity(state, kernels), v0));
  }
  return out;
}

// Acceptance band of a conservation-table cell, where one is stated.
inline std::optional<std::pair<double, double>> table_band(Shape shape, double tau) {
  const auto same = [](double x, double y) { return std::abs(x - y) <= 1e-12; };
  const double inf = std::numeric_limits<double>::infinity();
  if (same(tau, 1e-3)) {
    switch (shape) {
      case Shape::gaussian:
        return std::pair{-inf, 1e-5};
      case Shape::uniform:
        return std::pair{-inf, 4e-4};
      case Shape::random:
        // the random construction is not pinned down, so one decade either side of 0.04
        return std::pair{0.004, 0.4};
    }
  }
  if (same(tau, 5e-3) && shape != Shape::random) return std::pair{-inf, 1e-2};
  if (same(tau, 1e-2) && shape == Shape::gaussian) return std::pair{-inf, 1e-3};
  return std::nullopt;
}

inline std::string tau_tag(double tau) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", tau);
  return buf;
}

inline ExperimentReport paper_table_run(Shape shape, double tau, std::int64_t n_steps,
                                        std::uint64_t seed, const TableSetup& setup = {}) {
  const Lattice lattice = make_lattice(setup.n_sites, setup.lattice_constant);
  validate(EvolutionConfig{tau, Scheme::euler, ParityMode::odd_standard}, lattice);
  const StateSpec spec = table_state_spec(shape, setup, seed);
  const Variation v = euler_variation(make_state(lattice, spec), tau, n_steps);

  ExperimentReport report;
  report.scenario = "paper_table/" + to_string(shape) + "/tau=" + tau_tag(tau);
  report.parameters = {{"n_sites", static_cast<double>(setup.n_sites)},
                       {"lattice_constant", setup.lattice_constant},
                       {"tau", tau},
                       {"n_steps", static_cast<double>(n_steps)},
                       {"width", spec.width},
                       {"velocity_index", static_cast<double>(spec.velocity_index)},
                       {"seed", static_cast<double>(seed)}};
  report.metrics = {{"m_variation", v.m_total},
                    {"v_variation", v.drift_velocity},
                    {"max_variation", v.max()}};
  if (const auto band = table_band(shape, tau)) {
    report.checks.push_back(make_check(to_string(shape) + " tau=" + tau_tag(tau) + " max variation",
                                       v.max(), band->first, band->second));
  }
  return report;
}

// The 3 shapes x 3 time steps grid. The tau = 0.005 random cell is checked
// against ten times its tau = 0.001 value.
inline std::vector<ExperimentReport> paper_table(std::int64_t n_steps, std::uint64_t seed,
                                                 const TableSetup& setup = {}) {
  std::vector<ExperimentReport> rows;
  for (double tau : {1e-3, 5e-3, 1e-2}) {
    for (Shape shape : {Shape::gaussian, Shape::uniform, Shape::random}) {
      rows.push_back(paper_table_run(shape, tau, n_steps, seed, setup));
    }
  }
  const double random_small = *rows[2].metric("max_variation");
  ExperimentReport& random_mid = rows[5];
  const double ratio = random_small > 0.0 ? *random_mid.metric("max_variation") / random_small : 0.0;
  random_mid.metrics.push_back({"ratio_to_tau_0.001", ratio});
  random_mid.checks.push_back(check_at_least("random tau=0.005 degradation ratio", ratio, 10.0));
  return rows;
}

inline ExperimentReport tau_degradation_run(std::int64_t n_steps = 1000, std::uint64_t seed = 42,
                                            const TableSetup& setup = {}) {
  ExperimentReport report;
  report.scenario = "tau_degradation";
  report.parameters = {{"n_steps", static_cast<double>(n_steps)},
                       {"seed", static_cast<double>(seed)}};
  const auto run_cell = [&](Shape shape, double tau) {
    return paper_table_run(shape, tau, n_steps, seed, setup);
  };
  const ExperimentReport g5 = run_cell(Shape::gaussian, 5e-3);
  const ExperimentReport u5 = run_cell(Shape::uniform, 5e-3);
  const ExperimentReport g10 = run_cell(Shape::gaussian, 1e-2);
  const ExperimentReport r1 = run_cell(Shape::random, 1e-3);
  const ExperimentReport r5 = run_cell(Shape::random, 5e-3);
  for (const auto* r : {&g5, &u5, &g10}) report.append(*r);
  const double ratio = *r5.metric("max_variation") / *r1.metric("max_variation");
  report.metrics.push_back({"random_tau_0.001_variation", *r1.metric("max_variation")});
  report.metrics.push_back({"random_tau_0.005_variation", *r5.metric("max_variation")});
  report.metrics.push_back({"random_degradation_ratio", ratio});
  report.checks.push_back(check_at_least("random tau=0.005 degradation ratio", ratio, 10.0));
  return report;
}

// Closed-form kernels against their direct spectral sums for every d in
// [-2L, 2L]. `perturbation` is added to the closed forms (negative control).
inline ExperimentReport kernel_oracle_suite(const std::vector<std::int64_t>& n_sites_list,
                                            double perturbation = 0.0) {
  ExperimentReport report;
  report.scenario = "kernel_oracle";
  report.parameters = {{"perturbation", perturbation}};
  for (std::int64_t n : n_sites_list) {
    const Lattice lat = make_lattice(n, 1.0);
    const std::int64_t l = lat.half_width();
    const double f0 = kernel_f(0, lat);
    double f_err = 0.0;
    double g_err = 0.0;
    for (std::int64_t d = -2 * l; d <= 2 * l; ++d) {
      f_err = std::max(f_err, std::abs(kernel_f(d, lat) + perturbation - kernel_f_spectral(d, lat)));
      g_err = std::max(g_err, std::abs(kernel_g(d, lat) + perturbation - kernel_g_spectral(d, lat)));
    }
    const std::string tag = "N=" + std::to_string(n);
    report.metrics.push_back({"f_scaled_error/" + tag, f_err / f0});
    report.metrics.push_back({"g_scaled_error/" + tag, g_err / static_cast<double>(n)});
    report.checks.push_back(check_below("kernel F closed form vs spectral sum " + tag, f_err / f0, 1e-9));
    report.checks.push_back(check_below("kernel G closed form vs spectral sum " + tag,
                                        g_err / static_cast<double>(n), 1e-9));
  }
  return report;
}

namespace detail {

// (1/N) sum_k k^4 exp(i 2 pi k d / N), direct.
inline double fourth_power_sum(std::int64_t d, const Lattice& lat) {
  const auto s = power_sum(4, d, lat);
  return s.real();
}

}  // namespace detail

// Brute-force checks of the exact identities on small odd lattices:
//  * one-step M change of the reaction step equals
//    tau^2 g^4 sum_{r,u} c_r c*_u sum_s F(r-s) F(s-u)            (rel 1e-10)
//  * sum_s F(r-s) F(s-u) = (1/N) sum_k k^4 exp(i 2 pi k (r-u)/N) (rel 1e-8)
//  * sum_s [F(u-s) G(s-r) - G(u-s) F(s-r)] = 0                   (abs 1e-8 F(0)^2)
//  * one-step <P> change equals
//    -i tau^2 g^5 sum_{u,v} c*_u c_v sum_{s,r} F(u-s) G(s-r) F(r-v)
// Each state is checked at M = 1 and M = 7.
inline ExperimentReport identity_suite(const std::vector<std::int64_t>& n_sites_list,
                                       int states_per_lattice = 50, std::uint64_t seed = 7,
                                       double tau = 1e-2) {
  ExperimentReport report;
  report.scenario = "identity_suite";
  report.parameters = {{"states_per_lattice", static_cast<double>(states_per_lattice)},
                       {"seed", static_cast<double>(seed)},
                       {"tau", tau}};
  for (std::int64_t n : n_sites_list) {
    const Lattice lat = make_lattice(n, 1.0);
    const KernelTable kernels = build_kernel_table(lat);
    const std::int64_t l = lat.half_width();
    const double g = lat.reciprocal_constant();
    const double f0 = kernel_f(0, lat);
    const std::string tag = "N=" + std::to_string(n);
    const auto idx = [l](std::int64_t s) { return static_cast<std::size_t>(s + l); };

    // sum_s F(r-s) F(s-u) and the F/G commutator, for all (r, u)
    std::vector<double> ff(static_cast<std::size_t>(n * n));
    double conv_err = 0.0;
    double comm_err = 0.0;
    const double f4_0 = detail::fourth_power_sum(0, lat);
    for (std::int64_t r = -l; r <= l; ++r) {
      for (std::int64_t u = -l; u <= l; ++u) {
        double lhs = 0.0;
        double comm = 0.0;
        for (std::int64_t s = -l; s <= l; ++s) {
          lhs += kernel_f(r - s, lat) * kernel_f(s - u, lat);
          comm += kernel_f(r - s, lat) * kernel_g(s - u, lat) - kernel_g(r - s, lat) * kernel_f(s - u, lat);
        }
        ff[idx(r) * static_cast<std::size_t>(n) + idx(u)] = lhs;
        conv_err = std::max(conv_err, std::abs(lhs - detail::fourth_power_sum(r - u, lat)) / f4_0);
        comm_err = std::max(comm_err, std::abs(comm));
      }
    }

    // K(u, v) = sum_{s,r} F(u-s) G(s-r) F(r-v)
    std::vector<double> fg(static_cast<std::size_t>(n * n));
    for (std::int64_t u = -l; u <= l; ++u) {
      for (std::int64_t r = -l; r <= l; ++r) {
        double acc = 0.0;
        for (std::int64_t s = -l; s <= l; ++s) acc += kernel_f(u - s, lat) * kernel_g(s - r, lat);
        fg[idx(u) * static_cast<std::size_t>(n) + idx(r)] = acc;
      }
    }
    std::vector<double> fgf(static_cast<std::size_t>(n * n));
    for (std::int64_t u = -l; u <= l; ++u) {
      for (std::int64_t v = -l; v <= l; ++v) {
        double acc = 0.0;
        for (std::int64_t r = -l; r <= l; ++r) {
          acc += fg[idx(u) * static_cast<std::size_t>(n) + idx(r)] * kernel_f(r - v, lat);
        }
        fgf[idx(u) * static_cast<std::size_t>(n) + idx(v)] = acc;
      }
    }

    double m_err = 0.0;
    double p_err = 0.0;
    StateRng rng(seed + static_cast<std::uint64_t>(n));
    for (int k = 0; k < states_per_lattice; ++k) {
      const FieldState base = random_state(lat, rng.next_bits());
      for (double mass : {1.0, 7.0}) {
        const FieldState psi = scale(base, std::sqrt(mass));
        const auto c = psi.coefficients();
        std::complex<double> dm = 0.0;
        std::complex<double> dp = 0.0;
        for (std::size_t r = 0; r < c.size(); ++r) {
          for (std::size_t u = 0; u < c.size(); ++u) {
            dm += c[r] * std::conj(c[u]) * ff[r * c.size() + u];
            dp += std::conj(c[r]) * c[u] * fgf[r * c.size() + u];
          }
        }
        const double predicted_m = tau * tau * std::pow(g, 4) * dm.real();
        const double predicted_p =
            (std::complex<double>(0.0, -1.0) * tau * tau * std::pow(g, 5) * dp).real();
        const FieldState next = euler_step(psi, tau, kernels);
        const double measured_m = norm_m(next) - norm_m(psi);
        const double measured_p = momentum_expectation(next, kernels) - momentum_expectation(psi, kernels);
        m_err = std::max(m_err, std::abs(measured_m - predicted_m) / std::abs(predicted_m));
        // <P> changes can be arbitrarily close to zero; scale by the largest
        // possible magnitude tau^2 (g L)^5 M instead.
        const double p_scale = tau * tau * std::pow(g * static_cast<double>(l), 5) * mass;
        p_err = std::max(p_err, std::abs(measured_p - predicted_p) / p_scale);
      }
    }

    report.metrics.push_back({"m_drift_identity_rel_error/" + tag, m_err});
    report.metrics.push_back({"convolution_identity_rel_error/" + tag, conv_err});
    report.metrics.push_back({"commutator_residual_over_f0sq/" + tag, comm_err / (f0 * f0)});
    report.metrics.push_back({"p_drift_identity_scaled_error/" + tag, p_err});
    report.checks.push_back(check_below("M drift identity " + tag, m_err, 1e-10));
    report.checks.push_back(check_below("F*F convolution identity " + tag, conv_err, 1e-8));
    report.checks.push_back(check_below("F/G commutator identity " + tag, comm_err / (f0 * f0), 1e-8));
    report.checks.push_back(check_below("<P> drift identity " + tag, p_err, 1e-10));
  }
  return report;
}

// Least-squares slope of log(y) against log(x).
inline double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// One-step errors of the reaction step against the exact propagator, and the
// one-step changes of M and <P>, fitted for their order in tau.
inline ExperimentReport order_of_accuracy_run(const TableSetup& setup = {},
                                              std::vector<double> taus = {4e-3, 2e-3, 1e-3, 5e-4}) {
  const Lattice lat = make_lattice(setup.n_sites, setup.lattice_constant);
  const KernelTable kernels = build_kernel_table(lat);
  const FieldState psi =
      gaussian_state(lat, 0, setup.gaussian_sigma, setup.gaussian_velocity_index);
  const double m0 = norm_m(psi);
  const double p0 = momentum_expectation(psi, kernels);
  std::vector<double> step_err;
  std::vector<double> dm;
  std::vector<double> dp;
  ExperimentReport report;
  report.scenario = "order_of_accuracy";
  for (double tau : taus) {
    const FieldState eu = euler_step(psi, tau, kernels);
    const FieldState ex = exact_step(psi, tau);
    double diff = 0.0;
    for (std::size_t i = 0; i < eu.size(); ++i) diff += std::norm(eu.coefficient(i) - ex.coefficient(i));
    step_err.push_back(std::sqrt(diff / m0));
    dm.push_back(std::abs(norm_m(eu) - m0));
    dp.push_back(std::abs(momentum_expectation(eu, kernels) - p0));
    report.parameters.push_back({"tau", tau});
    report.metrics.push_back({"step_error/tau=" + tau_tag(tau), step_err.back()});
    report.metrics.push_back({"delta_m/tau=" + tau_tag(tau), dm.back()});
    report.metrics.push_back({"delta_p/tau=" + tau_tag(tau), dp.back()});
  }
  const double o1 = fitted_order(taus, step_err);
  const double o2 = fitted_order(taus, dm);
  const double o3 = fitted_order(taus, dp);
  report.metrics.push_back({"order/step_error", o1});
  report.metrics.push_back({"order/delta_m", o2});
  report.metrics.push_back({"order/delta_p", o3});
  report.checks.push_back(make_check("order of one-step euler-exact error", o1, 1.9, 2.1));
  report.checks.push_back(make_check("order of per-step |dM|", o2, 1.9, 2.1));
  report.checks.push_back(make_check("order of per-step |d<P>|", o3, 1.9, 2.1));
  return report;
}

// Boost, translation and exact-evolution invariants.
inline ExperimentReport structural_invariants_run(std::int64_t exact_steps = 1000,
                                                  double exact_tau = 1e-3,
                                                  std::uint64_t seed = 42) {
  ExperimentReport report;
  report.scenario = "structural_invariants";
  report.parameters = {{"exact_steps", static_cast<double>(exact_steps)},
                       {"exact_tau", exact_tau},
                       {"seed", static_cast<double>(seed)}};
  const Lattice lat = make_lattice(801, 1.0);
  const KernelTable kernels = build_kernel_table(lat);
  const double g = lat.reciprocal_constant();

  // boost leaves a^2 + b^2 untouched, for random states and arbitrary v
  double shape_err = 0.0;
  StateRng rng(seed);
  for (int k = 0; k < 20; ++k) {
    const FieldState psi = random_state(lat, rng.next_bits());
    const double v = 4.0 * rng.next_symmetric();
    const auto w0 = combined_distribution(psi);
    const auto w1 = combined_distribution(boost(psi, v));
    for (std::size_t i = 0; i < w0.size(); ++i) shape_err = std::max(shape_err, std::abs(w1[i] - w0[i]));
  }
  report.metrics.push_back({"boost_shape_error", shape_err});
  report.checks.push_back(check_below("boost preserves combined distribution", shape_err, 1e-12));

  // quantized boost shifts <V> by exactly v
  const FieldState rest = gaussian_state(lat, 0, 10.0, 0);
  double shift_err = 0.0;
  for (std::int64_t m : {1, 20, 50, -35}) {
    const double v = quantized_velocity(lat, m);
    const double dv = drift_velocity(boost(rest, v), kernels) - drift_velocity(rest, kernels);
    shift_err = std::max(shift_err, std::abs(dv - v));
  }
  report.metrics.push_back({"quantized_boost_shift_error", shift_err});
  report.checks.push_back(check_below("quantized boost shifts <V> by v", shift_err, 1e-6));

  // cyclic shift == exp(-i a P steps), including the L -> -L border
  double shift_vs_spectral = 0.0;
  {
    std::vector<double> a(static_cast<std::size_t>(lat.n_sites()), 0.0);
    std::vector<double> b(a.size(), 0.0);
    a[lat.index_of(lat.max_site())] = 1.0;
    const FieldState border(lat, a, b);
    const FieldState psi = random_state(lat, seed);
    for (const FieldState* s : {&border, &psi}) {
      for (std::int64_t steps : {1, -1, 7, 400, 801}) {
        const FieldState x = translate(*s, steps);
        const FieldState y = translate_spectral(*s, steps);
        for (std::size_t i = 0; i < x.size(); ++i) {
          shift_vs_spectral = std::max(shift_vs_spectral, std::abs(x.coefficient(i) - y.coefficient(i)));
        }
      }
    }
  }
  report.metrics.push_back({"translation_vs_generator_error", shift_vs_spectral});
  report.checks.push_back(check_below("cyclic shift equals exp(-iaP)", shift_vs_spectral, 1e-10));

  // exact evolution conserves M and <P>
  FieldState psi = gaussian_state(lat, 0, 10.0, 20);
  const double m0 = norm_m(psi);
  const double p0 = momentum_expectation(psi, kernels);
  double m_drift = 0.0;
  double p_drift = 0.0;
  for (std::int64_t t = 1; t <= exact_steps; ++t) {
    psi = exact_step(psi, exact_tau);
    m_drift = std::max(m_drift, std::abs(norm_m(psi) - m0));
    if (t % 10 == 0 || t == exact_steps) {
      p_drift = std::max(p_drift, std::abs(momentum_expectation(psi, kernels) - p0));
    }
  }
  report.metrics.push_back({"exact_m_drift", m_drift});
  report.metrics.push_back({"exact_p_drift", p_drift});
  report.metrics.push_back({"g", g});
  report.checks.push_back(check_below("exact scheme conserves M", m_drift, 1e-10));
  report.checks.push_back(check_below("exact scheme conserves <P>", p_drift, 1e-10));
  return report;
}

// Shape evolution: dispersion of a drifting gaussian under the exact
// propagator, side lobes of a uniform window under the reaction process, and
// a descriptive smoothness metric for random states.
inline ExperimentReport qualitative_shape_run(std::uint64_t seed = 42) {
  ExperimentReport report;
  report.scenario = "qualitative_shape";
  const Lattice lat = make_lattice(801, 1.0);
  const KernelTable kernels = build_kernel_table(lat);
  const double half_ring = 0.5 * static_cast<double>(lat.n_sites());

  {
    const double sigma = 10.0;
    const double dt = 0.5;
    const std::int64_t steps = 100;
    FieldState psi = gaussian_state(lat, 0, sigma, 20);
    double width = position_spread(psi);
    double max_residual = gaussian_shape_residual(psi);
    int non_increasing = 0;
    int far_from_wrap = 0;
    for (std::int64_t t = 1; t <= steps; ++t) {
      psi = exact_step(psi, dt);
      const double mean = position_mean(psi);
      const double w = position_spread(psi);
      if (std::abs(mean) + 10.0 * w > half_ring) break;
      ++far_from_wrap;
      if (!(w > width)) ++non_increasing;
      width = w;
      max_residual = std::max(max_residual, gaussian_shape_residual(psi));
    }
    report.metrics.push_back({"gaussian_final_width", width});
    report.metrics.push_back({"gaussian_max_shape_residual", max_residual});
    report.metrics.push_back({"gaussian_steps_far_from_wrap", static_cast<double>(far_from_wrap)});
    report.checks.push_back(check_below("gaussian keeps its shape", max_residual, 1e-2));
    report.checks.push_back(make_check("gaussian width grows monotonically",
                                       static_cast<double>(non_increasing), 0.0, 0.5));
    report.checks.push_back(check_at_least("gaussian tracked for the whole run",
                                           static_cast<double>(far_from_wrap),
                                           static_cast<double>(steps)));
  }

  {
    FieldState psi = gaussian_state(lat, 0, 10.0, 0);
    const double mean0 = position_mean(psi);
    double drift = 0.0;
    for (int t = 0; t < 20; ++t) {
      psi = exact_step(psi, 0.5);
      drift = std::max(drift, std::abs(position_mean(psi) - mean0));
    }
    report.metrics.push_back({"resting_gaussian_mean_drift", drift});
    report.checks.push_back(check_below("resting gaussian stays centered", drift, 1e-6));
  }

  {
    FieldState psi = uniform_state(lat, 0, 25, 0);
    const int before = local_maxima_count(combined_distribution(psi));
    for (int t = 0; t < 1000; ++t) psi = euler_step(psi, 1e-3, kernels);
    const int after = local_maxima_count(combined_distribution(psi));
    report.metrics.push_back({"uniform_local_maxima_before", static_cast<double>(before)});
    report.metrics.push_back({"uniform_local_maxima_after", static_cast<double>(after)});
    report.checks.push_back(check_at_least("uniform window develops side lobes",
                                           static_cast<double>(after - before), 2.0));
  }

  {
    FieldState euler = random_state(lat, seed);
    FieldState exact = euler;
    const double hf0 = high_frequency_fraction(euler);
    for (int t = 0; t < 1000; ++t) euler = euler_step(euler, 1e-3, kernels);
    exact = exact_step(exact, 1.0);
    report.metrics.push_back({"random_high_frequency_fraction_initial", hf0});
    report.metrics.push_back({"random_high_frequency_fraction_euler", high_frequency_fraction(euler)});
    report.metrics.push_back({"random_high_frequency_fraction_exact", high_frequency_fraction(exact)});
  }

  {
    const FieldState psi = gaussian_state(lat, 0, 10.0, 0);
    const double exact = m_drift_exact(psi, 1e-3, kernels);
    const double approx = m_drift_large_n_approximation(psi, 1e-3);
    report.metrics.push_back({"m_drift_exact_sigma10", exact});
    report.metrics.push_back({"m_drift_large_n_approx_sigma10", approx});
  }
  return report;
}

// Deviation of each lattice parity's reaction process from its own exact
// reference, for a confined packet and for one sitting on the border.
inline ExperimentReport even_odd_comparison(std::int64_t n_even = 800, std::int64_t n_odd = 801,
                                            double sigma = 5.0, std::int64_t n_steps = 100,
                                            double tau = 1e-3) {
  const Lattice even = make_even_lattice(n_even, 1.0);
  const Lattice odd = make_lattice(n_odd, 1.0);
  const KernelTable even_k = build_kernel_table(even);
  const KernelTable odd_k = build_kernel_table(odd);

  const auto deviation = [&](const FieldState& initial, const KernelTable& kernels) {
    FieldState model = initial;
    for (std::int64_t t = 0; t < n_steps; ++t) {
      model = initial.lattice().is_odd() ? euler_step(model, tau, kernels)
                                         : even_naive_step(model, tau, kernels);
    }
    const FieldState reference = exact_step(initial, tau * static_cast<double>(n_steps));
    double diff = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
      diff += std::norm(model.coefficient(i) - reference.coefficient(i));
    }
    return std::sqrt(diff / norm_m(initial));
  };

  ExperimentReport report;
  report.scenario = "even_odd";
  report.parameters = {{"n_even", static_cast<double>(n_even)},
                       {"n_odd", static_cast<double>(n_odd)},
                       {"sigma", sigma},
                       {"n_steps", static_cast<double>(n_steps)},
                       {"tau", tau}};

  const double odd_confined = deviation(gaussian_state(odd, 0, sigma, 0), odd_k);
  const double even_confined = deviation(gaussian_state(even, 0, sigma, 0), even_k);
  const double odd_wrapped = deviation(gaussian_state(odd, odd.max_site(), sigma, 0), odd_k);
  const double even_wrapped = deviation(gaussian_state(even, even.min_site(), sigma, 0), even_k);
  const double confined_ratio = even_confined / odd_confined;
  const double wrapped_ratio = even_wrapped / odd_wrapped;
  report.metrics = {{"odd_confined_deviation", odd_confined},
                    {"even_confined_deviation", even_confined},
                    {"odd_wrapped_deviation", odd_wrapped},
                    {"even_wrapped_deviation", even_wrapped},
                    {"confined_ratio", confined_ratio},
                    {"wrapped_ratio", wrapped_ratio}};
  report.checks.push_back(make_check("confined packet: parities agree within 2x", confined_ratio, 0.5, 2.0));
  report.checks.push_back(check_at_least("wrapped packet: even-naive deviation >= 1e3 x odd",
                                         wrapped_ratio, 1e3));
  return report;
}

}  // namespace cyclat
