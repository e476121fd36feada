#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cyclat/error.hpp"
#include "cyclat/evolution.hpp"
#include "cyclat/field_state.hpp"
#include "cyclat/lattice.hpp"

namespace cyclat {

// <V> = 4 g sum_{s,r} a_s b_r G(s - r), with s - r unwrapped in [-2L, 2L].
// Odd lattices only.
inline double drift_velocity(const FieldState& state, const KernelTable& kernels) {
  detail::require_same_lattice(state.lattice(), kernels.lattice());
  if (!state.lattice().is_odd()) throw LatticeError("drift_velocity requires an odd lattice");
  const auto a = state.a();
  const auto b = state.b();
  const std::size_t n = state.size();
  const std::int64_t l = state.lattice().half_width();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    // G(i - j) lives at g_values[i - j + 2L]
    const double* g_row = kernels.g_values().data() + 2 * l + static_cast<std::int64_t>(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += b[j] * *(g_row - static_cast<std::ptrdiff_t>(j));
    total += a[i] * acc;
  }
  return 4.0 * state.lattice().reciprocal_constant() * total;
}

// <P> = g sum_k k |c^_k|^2.
inline double momentum_expectation_spectral(const FieldState& state) {
  const MomentumSpectrum sp = to_momentum_basis(state);
  double total = 0.0;
  for (std::size_t j = 0; j < sp.size(); ++j) total += sp.momentum(j) * std::norm(sp.coefficients()[j]);
  return total;
}

// <P> = -i g sum_{s,r} c*_s c_r G(s - r). Throws ConsistencyError if the
// result is not real to 1e-10 (scaled by M g N).
inline double momentum_expectation(const FieldState& state, const KernelTable& kernels) {
  detail::require_same_lattice(state.lattice(), kernels.lattice());
  if (!state.lattice().is_odd()) {
    throw LatticeError("kernel-form momentum_expectation requires an odd lattice");
  }
  const auto c = state.coefficients();
  const std::size_t n = c.size();
  const std::int64_t l = state.lattice().half_width();
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* g_row = kernels.g_values().data() + 2 * l + static_cast<std::int64_t>(i);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += c[j] * *(g_row - static_cast<std::ptrdiff_t>(j));
    total += std::conj(c[i]) * acc;
  }
  const double g = state.lattice().reciprocal_constant();
  const std::complex<double> p = std::complex<double>(0.0, -g) * total;
  const double scale = norm_m(state) * g * static_cast<double>(n);
  if (std::abs(p.imag()) > 1e-10 * scale) {
    throw ConsistencyError("momentum expectation has imaginary residue " +
                           std::to_string(p.imag()));
  }
  return p.real();
}

inline double momentum_expectation(const FieldState& state) {
  return momentum_expectation(state, build_kernel_table(state.lattice()));
}

// |c^_k|^2 in slot order (slot 0 is the most negative k).
inline std::vector<double> momentum_distribution(const FieldState& state) {
  const MomentumSpectrum sp = to_momentum_basis(state);
  std::vector<double> out(sp.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::norm(sp.coefficients()[j]);
  return out;
}

namespace detail {

inline double checked_mass(std::span<const double> w) {
  double m = 0.0;
  for (double x : w) m += x;
  if (!(m > 0.0)) throw DegenerateStateError("diagnostic requested on an all-zero state");
  return m;
}

// Circular mean of a nonnegative distribution over the ring, in site units.
inline double circular_mean(std::span<const double> w, const Lattice& lat) {
  checked_mass(w);
  const double n = static_cast<double>(lat.n_sites());
  double c = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(lat.site_at(i)) / n;
    c += w[i] * std::cos(theta);
    s += w[i] * std::sin(theta);
  }
  return std::atan2(s, c) * n / (2.0 * std::numbers::pi);
}

// Real-valued displacement x - center folded into [-N/2, N/2).
inline double fold(double x, double center, double n) {
  double d = std::fmod(x - center + 0.5 * n, n);
  if (d < 0.0) d += n;
  return d - 0.5 * n;
}

inline double cyclic_spread(std::span<const double> w, const Lattice& lat, double mean) {
  const double m = checked_mass(w);
  const double n = static_cast<double>(lat.n_sites());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = fold(static_cast<double>(lat.site_at(i)), mean, n);
    acc += w[i] * d * d;
  }
  return std::sqrt(acc / m);
}

}  // namespace detail

// Circular mean of the combined distribution (sites, in [-N/2, N/2]).
inline double position_mean(const FieldState& state) {
  return detail::circular_mean(combined_distribution(state), state.lattice());
}

// Root-mean-square cyclic distance from position_mean (sites).
inline double position_spread(const FieldState& state) {
  const auto w = combined_distribution(state);
  return detail::cyclic_spread(w, state.lattice(), detail::circular_mean(w, state.lattice()));
}

// RMS deviation between the combined distribution and the cyclic gaussian with
// the same mass, circular mean and spread, divided by the peak height.
inline double gaussian_shape_residual(const FieldState& state) {
  const auto w = combined_distribution(state);
  const Lattice& lat = state.lattice();
  const double mass = detail::checked_mass(w);
  const double mean = detail::circular_mean(w, lat);
  const double spread = detail::cyclic_spread(w, lat, mean);
  const double n = static_cast<double>(lat.n_sites());
  std::vector<double> fit(w.size());
  double fit_mass = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = detail::fold(static_cast<double>(lat.site_at(i)), mean, n);
    fit[i] = spread > 0.0 ? std::exp(-d * d / (2.0 * spread * spread)) : (d == 0.0 ? 1.0 : 0.0);
    fit_mass += fit[i];
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = w[i] - fit[i] * mass / fit_mass;
    sq += r * r;
  }
  const double peak = *std::max_element(w.begin(), w.end());
  return std::sqrt(sq / static_cast<double>(w.size())) / peak;
}

// Strict cyclic local maxima of w whose height is at least
// relative_threshold times the global maximum.
inline int local_maxima_count(std::span<const double> w, double relative_threshold = 1e-3) {
  if (w.size() < 3) return 0;
  const double floor = relative_threshold * *std::max_element(w.begin(), w.end());
  int count = 0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = w[(i + n - 1) % n];
    const double right = w[(i + 1) % n];
    if (w[i] > left && w[i] > right && w[i] >= floor) ++count;
  }
  return count;
}

// Share of the combined distribution's non-constant spectral power carried by
// wavenumbers |q| > L/2. Descriptive smoothness metric.
inline double high_frequency_fraction(const FieldState& state) {
  const auto w = combined_distribution(state);
  const Lattice& lat = state.lattice();
  std::vector<std::complex<double>> wc(w.begin(), w.end());
  const auto spectrum = detail::transform(lat, wc, -1);
  const double cutoff = 0.5 * static_cast<double>(lat.half_width());
  const MomentumSpectrum labels(lat, spectrum);
  double high = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double q = labels.label(j);
    if (q == 0.0) continue;
    const double p = std::norm(spectrum[j]);
    total += p;
    if (std::abs(q) > cutoff) high += p;
  }
  return total > 0.0 ? high / total : 0.0;
}

// One-step change of M under the reaction step, from the exact expression
//   tau^2 g^4 sum_{r,u} c_r c*_u sum_s F(r-s) F(s-u) = tau^2 g^4 sum_s |(F c)_s|^2.
inline double m_drift_exact(const FieldState& state, double tau, const KernelTable& kernels) {
  detail::require_same_lattice(state.lattice(), kernels.lattice());
  const auto kernel = kernels.circulant_f();
  std::vector<double> fa(state.size());
  std::vector<double> fb(state.size());
  detail::circular_correlate(state.a(), kernel, fa);
  detail::circular_correlate(state.b(), kernel, fb);
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) acc += fa[i] * fa[i] + fb[i] * fb[i];
  const double g = state.lattice().reciprocal_constant();
  return tau * tau * g * g * g * g * acc;
}

// Large-lattice approximation of the same change,
//   tau^2 (pi^4 / 5) (2 sum_{r != u} c_r c*_u (-1)^(r-u) / (r-u)^2 + M),
// for a = 1 (the general form carries a factor a^-4). Diagnostic only: it is
// not an identity.
inline double m_drift_large_n_approximation(const FieldState& state, double tau) {
  const auto c = state.coefficients();
  const Lattice& lat = state.lattice();
  double cross = 0.0;
  for (std::size_t r = 0; r < c.size(); ++r) {
    for (std::size_t u = 0; u < c.size(); ++u) {
      if (r == u) continue;
      const auto d = static_cast<std::int64_t>(r) - static_cast<std::int64_t>(u);
      const double dd = static_cast<double>(d);
      cross += (c[r] * std::conj(c[u])).real() * detail::alternating_sign(d) / (dd * dd);
    }
  }
  const double a = lat.lattice_constant();
  const double coefficient = std::pow(std::numbers::pi, 4) / 5.0 / (a * a * a * a);
  return tau * tau * coefficient * (2.0 * cross + norm_m(state));
}

struct ObservableSnapshot {
  std::int64_t step = 0;
  double m_total = 0.0;
  double drift_velocity = 0.0;
  double momentum_expectation = 0.0;
  double position_mean = 0.0;
  double position_spread = 0.0;
  double shape_residual = 0.0;

  friend bool operator==(const ObservableSnapshot&, const ObservableSnapshot&) = default;
};

// All observables of `state`. On even lattices <P> uses the spectral form and
// <V> = 2 <P>, since G is only tabulated for odd N.
inline ObservableSnapshot snapshot(std::int64_t step, const FieldState& state,
                                   const KernelTable& kernels) {
  ObservableSnapshot snap;
  snap.step = step;
  snap.m_total = norm_m(state);
  if (state.lattice().is_odd()) {
    snap.drift_velocity = drift_velocity(state, kernels);
    snap.momentum_expectation = momentum_expectation(state, kernels);
  } else {
    snap.momentum_expectation = momentum_expectation_spectral(state);
    snap.drift_velocity = 2.0 * snap.momentum_expectation;
  }
  if (snap.m_total > 0.0) {
    snap.position_mean = position_mean(state);
    snap.position_spread = position_spread(state);
    snap.shape_residual = gaussian_shape_residual(state);
  }
  return snap;
}

}  // namespace cyclat
