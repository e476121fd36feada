#pragma once

// The two-field state: real A and B occupation fields a_s, b_s on every site
// (negative values count antiparticles). Jointly they are the complex
// amplitude c_s = a_s + i b_s.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cyclat/error.hpp"
#include "cyclat/lattice.hpp"

namespace cyclat {

class FieldState {
 public:
  FieldState() = default;

  FieldState(const Lattice& lattice, std::vector<double> a_field, std::vector<double> b_field)
      : lattice_(lattice), a_(std::move(a_field)), b_(std::move(b_field)) {
    const auto n = static_cast<std::size_t>(lattice_.n_sites());
    if (a_.size() != n || b_.size() != n) {
      throw ParameterError("field arrays must have N = " + std::to_string(n) + " entries");
    }
    const auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(a_.begin(), a_.end(), finite) || !std::all_of(b_.begin(), b_.end(), finite)) {
      throw ParameterError("field entries must be finite");
    }
  }

  static FieldState zero(const Lattice& lattice) {
    const auto n = static_cast<std::size_t>(lattice.n_sites());
    return FieldState(lattice, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
  }

  static FieldState from_coefficients(const Lattice& lattice,
                                      std::span<const std::complex<double>> c) {
    std::vector<double> a(c.size());
    std::vector<double> b(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      a[i] = c[i].real();
      b[i] = c[i].imag();
    }
    return FieldState(lattice, std::move(a), std::move(b));
  }

  const Lattice& lattice() const { return lattice_; }
  std::size_t size() const { return a_.size(); }

  // Storage order is ascending site label, starting at lattice().min_site().
  std::span<const double> a() const { return a_; }
  std::span<const double> b() const { return b_; }

  double a_at(Site s) const { return a_[lattice_.index_of(wrap_index(s, lattice_))]; }
  double b_at(Site s) const { return b_[lattice_.index_of(wrap_index(s, lattice_))]; }

  std::complex<double> coefficient(std::size_t index) const { return {a_[index], b_[index]}; }

  std::vector<std::complex<double>> coefficients() const {
    std::vector<std::complex<double>> c(a_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = {a_[i], b_[i]};
    return c;
  }

  friend bool operator==(const FieldState&, const FieldState&) = default;

 private:
  Lattice lattice_;
  std::vector<double> a_;
  std::vector<double> b_;
};

// M = sum_s (a_s^2 + b_s^2).
inline double norm_m(const FieldState& state) {
  double m = 0.0;
  const auto a = state.a();
  const auto b = state.b();
  for (std::size_t i = 0; i < a.size(); ++i) m += a[i] * a[i] + b[i] * b[i];
  return m;
}

inline std::vector<double> combined_distribution(const FieldState& state) {
  std::vector<double> w(state.size());
  const auto a = state.a();
  const auto b = state.b();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = a[i] * a[i] + b[i] * b[i];
  return w;
}

inline FieldState scale(const FieldState& state, double factor) {
  std::vector<double> a(state.a().begin(), state.a().end());
  std::vector<double> b(state.b().begin(), state.b().end());
  for (auto& x : a) x *= factor;
  for (auto& x : b) x *= factor;
  return FieldState(state.lattice(), std::move(a), std::move(b));
}

inline FieldState normalize(const FieldState& state) {
  const double m = norm_m(state);
  if (!(m > 0.0)) throw DegenerateStateError("cannot normalize an all-zero state");
  return scale(state, 1.0 / std::sqrt(m));
}

// Site-local rotation of (a_s, b_s) by the angle v a s / 2, i.e.
// c_s -> exp(i v a s / 2) c_s. Changes the drift velocity by v and leaves the
// combined distribution untouched. Only v = 2 g m with integer m is
// single-valued on the ring; other values are accepted as given.
inline FieldState boost(const FieldState& state, double velocity) {
  const Lattice& lat = state.lattice();
  const double half_va = 0.5 * velocity * lat.lattice_constant();
  std::vector<double> a(state.size());
  std::vector<double> b(state.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double angle = half_va * static_cast<double>(lat.site_at(i));
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    a[i] = state.a()[i] * c - state.b()[i] * s;
    b[i] = state.a()[i] * s + state.b()[i] * c;
  }
  return FieldState(lat, std::move(a), std::move(b));
}

// Velocity of a quantized boost by `velocity_index` momentum slots.
inline double quantized_velocity(const Lattice& lattice, std::int64_t velocity_index) {
  return 2.0 * lattice.reciprocal_constant() * static_cast<double>(velocity_index);
}

// Minimal signed distance from `center` to `s` around the ring.
inline Site cyclic_offset(Site s, Site center, const Lattice& lattice) {
  const Site n = lattice.n_sites();
  Site d = (s - center) % n;
  if (d < 0) d += n;
  if (2 * d > n) d -= n;
  return d;
}

namespace detail {

inline void check_center(Site center, const Lattice& lattice) {
  if (center < lattice.min_site() || center > lattice.max_site()) {
    throw ParameterError("center " + std::to_string(center) + " outside [" +
                         std::to_string(lattice.min_site()) + ", " +
                         std::to_string(lattice.max_site()) + "]");
  }
}

}  // namespace detail

// a_s = exp(-ds^2 / (4 sigma^2)) with ds the cyclic distance to `center`, so
// that the combined distribution has standard deviation sigma. Normalized to
// M = 1, then boosted by 2 g velocity_index.
inline FieldState gaussian_state(const Lattice& lattice, Site center, double sigma,
                                 std::int64_t velocity_index) {
  detail::check_center(center, lattice);
  if (!(sigma > 0.0) || sigma > static_cast<double>(lattice.half_width())) {
    throw ParameterError("gaussian sigma must lie in (0, " +
                         std::to_string(lattice.half_width()) + "]");
  }
  std::vector<double> a(static_cast<std::size_t>(lattice.n_sites()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ds = static_cast<double>(cyclic_offset(lattice.site_at(i), center, lattice));
    a[i] = std::exp(-ds * ds / (4.0 * sigma * sigma));
  }
  std::vector<double> b(a.size(), 0.0);
  FieldState state(lattice, std::move(a), std::move(b));
  return boost(normalize(state), quantized_velocity(lattice, velocity_index));
}

// Constant amplitude on the 2W+1 sites within cyclic distance W of `center`.
inline FieldState uniform_state(const Lattice& lattice, Site center, std::int64_t half_width,
                                std::int64_t velocity_index) {
  detail::check_center(center, lattice);
  if (half_width < 1 || half_width > lattice.half_width()) {
    throw ParameterError("uniform half-width must lie in [1, " +
                         std::to_string(lattice.half_width()) + "]");
  }
  std::vector<double> a(static_cast<std::size_t>(lattice.n_sites()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Site ds = cyclic_offset(lattice.site_at(i), center, lattice);
    if (ds >= -half_width && ds <= half_width) a[i] = 1.0;
  }
  std::vector<double> b(a.size(), 0.0);
  FieldState state(lattice, std::move(a), std::move(b));
  return boost(normalize(state), quantized_velocity(lattice, velocity_index));
}

// Deterministic generator for random states: std::mt19937_64 (its output
// sequence is fixed by the standard), mapped to [-1, 1) as 2 * (x >> 11) *
// 2^-53 - 1. Values are drawn site by site in ascending label order, a_s
// before b_s.
class StateRng {
 public:
  explicit StateRng(std::uint64_t seed) : engine_(seed) {}

  double next_symmetric() {
    const std::uint64_t x = engine_();
    const double unit = static_cast<double>(x >> 11) * 0x1.0p-53;
    return 2.0 * unit - 1.0;
  }

  // Raw 64-bit output, used to derive seeds for sub-streams.
  std::uint64_t next_bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline FieldState random_state(const Lattice& lattice, std::uint64_t seed) {
  StateRng rng(seed);
  const auto n = static_cast<std::size_t>(lattice.n_sites());
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.next_symmetric();
    b[i] = rng.next_symmetric();
  }
  return normalize(FieldState(lattice, std::move(a), std::move(b)));
}

enum class Shape { gaussian, uniform, random };

inline std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::gaussian:
      return "gaussian";
    case Shape::uniform:
      return "uniform";
    case Shape::random:
      return "random";
  }
  return "?";
}

inline Shape parse_shape(const std::string& name) {
  if (name == "gaussian") return Shape::gaussian;
  if (name == "uniform") return Shape::uniform;
  if (name == "random") return Shape::random;
  throw ConfigError("unknown shape '" + name + "' (expected gaussian, uniform or random)");
}

// Initial-state recipe. `width` is sigma for gaussian and the window
// half-width W for uniform; it is ignored for random states, which are also
// boosted by velocity_index.
struct StateSpec {
  Shape shape = Shape::gaussian;
  Site center = 0;
  double width = 10.0;
  std::int64_t velocity_index = 20;
  std::uint64_t seed = 42;

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

inline FieldState make_state(const Lattice& lattice, const StateSpec& spec) {
  switch (spec.shape) {
    case Shape::gaussian:
      return gaussian_state(lattice, spec.center, spec.width, spec.velocity_index);
    case Shape::uniform: {
      const double w = std::round(spec.width);
      if (w != spec.width) throw ParameterError("uniform half-width must be an integer");
      return uniform_state(lattice, spec.center, static_cast<std::int64_t>(w),
                           spec.velocity_index);
    }
    case Shape::random:
      return boost(random_state(lattice, spec.seed),
                   quantized_velocity(lattice, spec.velocity_index));
  }
  throw ParameterError("unknown shape");
}

}  // namespace cyclat
