#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "cyclat/field_state.hpp"
#include "cyclat/lattice.hpp"

namespace cyclat::test {

// Direct sums over integer momenta, written independently of the library.
inline double brute_f(std::int64_t d, std::int64_t n) {
  const std::int64_t l = (n - 1) / 2;
  std::complex<double> acc = 0.0;
  for (std::int64_t k = -l; k <= l; ++k) {
    const std::int64_t m = ((k * d) % n + n) % n;
    acc += static_cast<double>(k * k) *
           std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  }
  return acc.real() / static_cast<double>(n);
}

inline double brute_g(std::int64_t d, std::int64_t n) {
  const std::int64_t l = (n - 1) / 2;
  std::complex<double> acc = 0.0;
  for (std::int64_t k = -l; k <= l; ++k) {
    const std::int64_t m = ((k * d) % n + n) % n;
    acc += static_cast<double>(k) *
           std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  }
  return -acc.imag() / static_cast<double>(n);
}

inline FieldState random_unnormalized(const Lattice& lat, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(lat.n_sites()));
  std::vector<double> b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = dist(gen);
    b[i] = dist(gen);
  }
  return FieldState(lat, std::move(a), std::move(b));
}

inline double max_abs_diff(const FieldState& x, const FieldState& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m = std::max(m, std::abs(x.a()[i] - y.a()[i]));
    m = std::max(m, std::abs(x.b()[i] - y.b()[i]));
  }
  return m;
}

inline double l2_diff(const FieldState& x, const FieldState& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double da = x.a()[i] - y.a()[i];
    const double db = x.b()[i] - y.b()[i];
    acc += da * da + db * db;
  }
  return std::sqrt(acc);
}

}  // namespace cyclat::test
