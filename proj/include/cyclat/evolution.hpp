#pragma once

// Time evolution on the ring.
//
// Two engines:
//   * the linearized reaction process (one Euler step of c -> c - i tau H c,
//     H = g^2 F as a circulant matrix), written in terms of the A/B fields;
//   * the exact unitary exp(-i P^2 t), applied in the momentum basis.
//
// Even lattices get a naive reaction step (same F, plain cyclic wrapping) and
// an exact reference with half-integer momenta, which is the antiperiodic
// ("sign-corrected") quantum evolution on an even ring.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cyclat/error.hpp"
#include "cyclat/field_state.hpp"
#include "cyclat/lattice.hpp"

namespace cyclat {

enum class Scheme { euler, exact };
enum class ParityMode { odd_standard, even_naive };

inline std::string to_string(Scheme scheme) {
  return scheme == Scheme::euler ? "euler" : "exact";
}

inline std::string to_string(ParityMode mode) {
  return mode == ParityMode::odd_standard ? "odd_standard" : "even_naive";
}

inline Scheme parse_scheme(const std::string& name) {
  if (name == "euler") return Scheme::euler;
  if (name == "exact") return Scheme::exact;
  throw ConfigError("unknown scheme '" + name + "' (expected euler or exact)");
}

inline ParityMode parse_parity_mode(const std::string& name) {
  if (name == "odd_standard") return ParityMode::odd_standard;
  if (name == "even_naive") return ParityMode::even_naive;
  throw ConfigError("unknown parity mode '" + name + "' (expected odd_standard or even_naive)");
}

struct EvolutionConfig {
  double tau = 1e-3;
  Scheme scheme = Scheme::euler;
  ParityMode parity_mode = ParityMode::odd_standard;

  friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

// Linearization guard for the Euler scheme: tau g^2 N^2 < 0.5 (hard), with a
// warning above 0.1.
inline constexpr double kEulerStepHardLimit = 0.5;
inline constexpr double kEulerStepWarnLimit = 0.1;

inline double euler_step_parameter(double tau, const Lattice& lattice) {
  const double gn = lattice.reciprocal_constant() * static_cast<double>(lattice.n_sites());
  return tau * gn * gn;
}

// Validates `config` against `lattice`. Returns a warning message when the
// step is legal but outside the comfortable range.
inline std::optional<std::string> validate(const EvolutionConfig& config, const Lattice& lattice) {
  if (!(config.tau > 0.0) || !std::isfinite(config.tau)) {
    throw ParameterError("time step tau must be positive and finite");
  }
  const bool wants_even = config.parity_mode == ParityMode::even_naive;
  if (wants_even == lattice.is_odd()) {
    throw LatticeError(wants_even ? "even_naive mode requires an even number of sites"
                                  : "odd_standard mode requires an odd number of sites");
  }
  if (config.scheme != Scheme::euler) return std::nullopt;
  const double p = euler_step_parameter(config.tau, lattice);
  if (p >= kEulerStepHardLimit) {
    throw NumericalGuardError("tau g^2 N^2 = " + std::to_string(p) + " exceeds the hard limit " +
                              std::to_string(kEulerStepHardLimit) + " of the linearized step");
  }
  if (p > kEulerStepWarnLimit) {
    return "tau g^2 N^2 = " + std::to_string(p) + " is above " +
           std::to_string(kEulerStepWarnLimit) + "; the linearized step loses accuracy";
  }
  return std::nullopt;
}

namespace detail {

inline void require_same_lattice(const Lattice& a, const Lattice& b) {
  if (!(a == b)) throw LatticeError("state and kernel table belong to different lattices");
}

// out[i] = sum_j x[j] kernel[(j - i) mod N]; kernel indexed by circular offset.
inline void circular_correlate(std::span<const double> x, std::span<const double> kernel,
                               std::span<double> out) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* k_hi = kernel.data() - i;  // offsets j - i for j >= i
    for (std::size_t j = i; j < n; ++j) acc += x[j] * k_hi[j];
    const double* k_lo = kernel.data() + (n - i);  // offsets j - i + N for j < i
    for (std::size_t j = 0; j < i; ++j) acc += x[j] * k_lo[j];
    out[i] = acc;
  }
}

inline FieldState reaction_step(const FieldState& state, double tau, const KernelTable& kernels) {
  const Lattice& lat = state.lattice();
  const std::vector<double> kernel = kernels.circulant_f();
  const std::size_t n = state.size();
  std::vector<double> from_b(n);
  std::vector<double> from_a(n);
  circular_correlate(state.b(), kernel, from_b);
  circular_correlate(state.a(), kernel, from_a);
  const double g = lat.reciprocal_constant();
  const double rate = tau * g * g;
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = state.a()[i] + rate * from_b[i];
    b[i] = state.b()[i] - rate * from_a[i];
  }
  return FieldState(lat, std::move(a), std::move(b));
}

}  // namespace detail

// One step of the reaction process:
//   a_s <- a_s + tau g^2 sum_d b_[s+d] F(d)
//   b_s <- b_s - tau g^2 sum_d a_[s+d] F(d)
// Direct O(N^2) circular correlation.
inline FieldState euler_step(const FieldState& state, double tau, const KernelTable& kernels) {
  detail::require_same_lattice(state.lattice(), kernels.lattice());
  if (!state.lattice().is_odd()) {
    throw LatticeError("euler_step requires an odd lattice; use even_naive_step on even lattices");
  }
  return detail::reaction_step(state, tau, kernels);
}

// Naive even-N reaction step: the same rule, F from the closed form with
// F(+-N/2) = 0, sites wrapped into [-N/2, N/2 - 1] without any sign change.
inline FieldState even_naive_step(const FieldState& state, double tau, const KernelTable& kernels) {
  detail::require_same_lattice(state.lattice(), kernels.lattice());
  if (state.lattice().is_odd()) {
    throw LatticeError("even_naive_step requires an even lattice");
  }
  return detail::reaction_step(state, tau, kernels);
}

// Coefficients in the unbiased (momentum) basis,
//   c^_k = N^{-1/2} sum_s exp(-i 2 pi k s / N) c_s.
// Odd lattices use integer k in [-L, L]. Even lattices use the half-integer
// momenta k = -(N-1)/2, ..., (N-1)/2.
class MomentumSpectrum {
 public:
  MomentumSpectrum() = default;
  MomentumSpectrum(const Lattice& lattice, std::vector<std::complex<double>> coefficients)
      : lattice_(lattice), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != static_cast<std::size_t>(lattice_.n_sites())) {
      throw ParameterError("momentum spectrum must have N entries");
    }
  }

  const Lattice& lattice() const { return lattice_; }
  std::span<const std::complex<double>> coefficients() const { return coefficients_; }
  std::span<std::complex<double>> coefficients() { return coefficients_; }
  std::size_t size() const { return coefficients_.size(); }

  // Twice the momentum label of slot j (an integer for both parities).
  std::int64_t doubled_label(std::size_t j) const {
    const std::int64_t n = lattice_.n_sites();
    return 2 * static_cast<std::int64_t>(j) - (n - 1);
  }
  // Momentum label k of slot j (slot 0 is the most negative).
  double label(std::size_t j) const { return 0.5 * static_cast<double>(doubled_label(j)); }
  // Physical momentum g k.
  double momentum(std::size_t j) const { return lattice_.reciprocal_constant() * label(j); }

 private:
  Lattice lattice_;
  std::vector<std::complex<double>> coefficients_;
};

namespace detail {

// exp(i pi m / N) for m in [0, 2N).
inline std::vector<std::complex<double>> half_twiddles(std::int64_t n) {
  std::vector<std::complex<double>> t(static_cast<std::size_t>(2 * n));
  for (std::int64_t m = 0; m < 2 * n; ++m) {
    t[static_cast<std::size_t>(m)] =
        std::polar(1.0, std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  }
  return t;
}

// Direct DFT between site and momentum slots with phase exp(sign i pi (2k) s / N).
inline std::vector<std::complex<double>> transform(const Lattice& lat,
                                                   std::span<const std::complex<double>> in,
                                                   int sign) {
  const std::int64_t n = lat.n_sites();
  const std::int64_t period = 2 * n;
  const auto tw = half_twiddles(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  const auto reduce = [period](std::int64_t m) {
    m %= period;
    return m < 0 ? m + period : m;
  };
  for (std::int64_t j = 0; j < n; ++j) {
    const std::int64_t k2 = 2 * j - (n - 1);
    // phase index of (2k) s for s = min_site, then step by 2k per site
    const std::int64_t stride = reduce(sign * k2);
    std::int64_t m = reduce(sign * k2 * lat.min_site());
    std::complex<double> acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      acc += tw[static_cast<std::size_t>(m)] * in[static_cast<std::size_t>(i)];
      m += stride;
      if (m >= period) m -= period;
    }
    out[static_cast<std::size_t>(j)] = acc * scale;
  }
  return out;
}

// Inverse of transform(): slots back to sites.
inline std::vector<std::complex<double>> inverse_transform(const Lattice& lat,
                                                           std::span<const std::complex<double>> in,
                                                           int sign) {
  const std::int64_t n = lat.n_sites();
  const std::int64_t period = 2 * n;
  const auto tw = half_twiddles(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  const auto reduce = [period](std::int64_t m) {
    m %= period;
    return m < 0 ? m + period : m;
  };
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t s = lat.site_at(static_cast<std::size_t>(i));
    const std::int64_t stride = reduce(sign * 2 * s);
    std::int64_t m = reduce(sign * (1 - n) * s);
    std::complex<double> acc = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      acc += tw[static_cast<std::size_t>(m)] * in[static_cast<std::size_t>(j)];
      m += stride;
      if (m >= period) m -= period;
    }
    out[static_cast<std::size_t>(i)] = acc * scale;
  }
  return out;
}

}  // namespace detail

inline MomentumSpectrum to_momentum_basis(const FieldState& state) {
  const auto c = state.coefficients();
  return MomentumSpectrum(state.lattice(), detail::transform(state.lattice(), c, -1));
}

inline FieldState from_momentum_basis(const MomentumSpectrum& spectrum) {
  const auto c = detail::inverse_transform(spectrum.lattice(), spectrum.coefficients(), +1);
  return FieldState::from_coefficients(spectrum.lattice(), c);
}

namespace detail {

template <typename Multiplier>
FieldState diagonal_in_momentum(const FieldState& state, Multiplier&& multiplier) {
  MomentumSpectrum spectrum = to_momentum_basis(state);
  auto coeffs = spectrum.coefficients();
  for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] *= multiplier(spectrum, j);
  return from_momentum_basis(spectrum);
}

}  // namespace detail

// exp(-i P^2 t): multiply each momentum coefficient by exp(-i (g k)^2 t).
// On an even lattice this is the half-integer-momentum (antiperiodic) evolution.
inline FieldState exact_step(const FieldState& state, double t) {
  return detail::diagonal_in_momentum(state, [t](const MomentumSpectrum& sp, std::size_t j) {
    const double p = sp.momentum(j);
    return std::polar(1.0, -p * p * t);
  });
}

// Same update as euler_step, applied as the diagonal factor (1 - i tau (g k)^2)
// in the momentum basis. Odd lattices only.
inline FieldState euler_step_spectral(const FieldState& state, double tau) {
  if (!state.lattice().is_odd()) throw LatticeError("euler_step_spectral requires an odd lattice");
  return detail::diagonal_in_momentum(state, [tau](const MomentumSpectrum& sp, std::size_t j) {
    const double p = sp.momentum(j);
    return std::complex<double>(1.0, -tau * p * p);
  });
}

// Cyclic shift by `steps` sites: the value at site s moves to s + steps.
inline FieldState translate(const FieldState& state, std::int64_t steps) {
  const Lattice& lat = state.lattice();
  const auto n = static_cast<std::int64_t>(state.size());
  std::vector<double> a(state.size());
  std::vector<double> b(state.size());
  std::int64_t shift = steps % n;
  if (shift < 0) shift += n;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto dst = static_cast<std::size_t>((i + shift) % n);
    a[dst] = state.a()[static_cast<std::size_t>(i)];
    b[dst] = state.b()[static_cast<std::size_t>(i)];
  }
  return FieldState(lat, std::move(a), std::move(b));
}

// exp(-i a P steps) through the momentum basis. On odd lattices this equals
// translate(); on even lattices amplitude picks up a minus sign each time it
// crosses the border.
inline FieldState translate_spectral(const FieldState& state, std::int64_t steps) {
  const std::int64_t n = state.lattice().n_sites();
  return detail::diagonal_in_momentum(state, [n, steps](const MomentumSpectrum& sp, std::size_t j) {
    // phase -2 pi k steps / N = -pi (2k) steps / N, reduced exactly
    const std::int64_t period = 2 * n;
    std::int64_t m = (sp.doubled_label(j) * (steps % period)) % period;
    if (m < 0) m += period;
    return std::polar(1.0, -std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  });
}

// Advances `state` by one step of the configured scheme.
inline FieldState step(const FieldState& state, const EvolutionConfig& config,
                       const KernelTable& kernels) {
  if (config.scheme == Scheme::exact) return exact_step(state, config.tau);
  if (config.parity_mode == ParityMode::even_naive) {
    return even_naive_step(state, config.tau, kernels);
  }
  return euler_step(state, config.tau, kernels);
}

}  // namespace cyclat
