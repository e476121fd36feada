#pragma once

// Cyclic lattice geometry and the two distance kernels of the free-particle
// reaction process:
//
//   F(d) = (1/N) sum_k k^2 exp(i 2 pi k d / N)   (matrix element of P^2 / g^2)
//   G(d) = (i/N) sum_k k   exp(i 2 pi k d / N)   (matrix element of P, times i/g)
//
// with k running over the N momentum slots. Both have closed forms, which are
// the fast path; the direct sums are kept as an independent oracle.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "cyclat/error.hpp"

namespace cyclat {

using Site = std::int64_t;

enum class Parity { odd, even };

// Geometry of an N-site ring with spacing `a`.
//
// Odd N (the physical case): sites are labeled s in [-L, L], N = 2L + 1.
// Even N (demonstration only): sites are labeled s in [-N/2, N/2 - 1].
class Lattice {
 public:
  Lattice() = default;

  std::int64_t n_sites() const { return n_sites_; }
  // L for odd lattices, N/2 for even ones.
  std::int64_t half_width() const { return half_width_; }
  double lattice_constant() const { return lattice_constant_; }
  // g = 2 pi / (N a).
  double reciprocal_constant() const { return reciprocal_constant_; }
  Parity parity() const { return parity_; }
  bool is_odd() const { return parity_ == Parity::odd; }

  Site min_site() const { return -half_width_; }
  Site max_site() const { return parity_ == Parity::odd ? half_width_ : half_width_ - 1; }

  // Storage offset of a site label (0 for min_site()).
  std::size_t index_of(Site s) const { return static_cast<std::size_t>(s - min_site()); }
  Site site_at(std::size_t index) const { return min_site() + static_cast<Site>(index); }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  friend Lattice make_lattice(std::int64_t, double);
  friend Lattice make_even_lattice(std::int64_t, double);

  Lattice(std::int64_t n, double a, Parity parity)
      : n_sites_(n),
        half_width_(parity == Parity::odd ? (n - 1) / 2 : n / 2),
        lattice_constant_(a),
        reciprocal_constant_(2.0 * std::numbers::pi / (static_cast<double>(n) * a)),
        parity_(parity) {}

  std::int64_t n_sites_ = 0;
  std::int64_t half_width_ = 0;
  double lattice_constant_ = 0.0;
  double reciprocal_constant_ = 0.0;
  Parity parity_ = Parity::odd;
};

inline Lattice make_lattice(std::int64_t n_sites, double lattice_constant) {
  if (n_sites < 3 || n_sites % 2 == 0) {
    throw LatticeError("lattice requires an odd number of sites N >= 3, got " +
                       std::to_string(n_sites) +
                       " (even N is only available through make_even_lattice)");
  }
  if (!(lattice_constant > 0.0) || !std::isfinite(lattice_constant)) {
    throw LatticeError("lattice constant must be positive and finite");
  }
  return Lattice(n_sites, lattice_constant, Parity::odd);
}

// Even-N ring for the naive even-parity demonstration. Not a model of the
// quantum particle once amplitude crosses the +-N/2 border.
inline Lattice make_even_lattice(std::int64_t n_sites, double lattice_constant) {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw LatticeError("even lattice requires an even number of sites N >= 2, got " +
                       std::to_string(n_sites));
  }
  if (!(lattice_constant > 0.0) || !std::isfinite(lattice_constant)) {
    throw LatticeError("lattice constant must be positive and finite");
  }
  return Lattice(n_sites, lattice_constant, Parity::even);
}

// Unique representative of s modulo N within [min_site, max_site].
inline Site wrap_index(Site s, const Lattice& lattice) {
  const Site n = lattice.n_sites();
  Site r = (s - lattice.min_site()) % n;
  if (r < 0) r += n;
  return r + lattice.min_site();
}

namespace detail {

inline bool is_even(std::int64_t d) { return d % 2 == 0; }

inline double alternating_sign(std::int64_t d) { return is_even(d) ? 1.0 : -1.0; }

}  // namespace detail

// Closed form of F, evaluated at the literal (unwrapped) argument. For odd N
// the closed form is N-periodic, so F(s - r) with s - r in [-2L, 2L] needs no
// wrapping. On an even lattice the value at d = +-N/2 is exactly zero.
inline double kernel_f(std::int64_t d, const Lattice& lattice) {
  const std::int64_t n = lattice.n_sites();
  const double nd = static_cast<double>(n);
  if (d % n == 0) return (nd * nd - 1.0) / 12.0;
  if (!lattice.is_odd() && (d % n == n / 2 || d % n == -n / 2)) return 0.0;
  const double x = std::numbers::pi * static_cast<double>(d) / nd;
  const double sx = std::sin(x);
  return detail::alternating_sign(d) * std::cos(x) / (2.0 * sx * sx);
}

// Closed form of G (odd lattices). G is odd in d and vanishes at d = 0.
inline double kernel_g(std::int64_t d, const Lattice& lattice) {
  if (!lattice.is_odd()) {
    throw LatticeError("kernel G is defined for odd lattices only");
  }
  const std::int64_t n = lattice.n_sites();
  if (d % n == 0) return 0.0;
  const double x = std::numbers::pi * static_cast<double>(d) / static_cast<double>(n);
  return detail::alternating_sign(d) / (2.0 * std::sin(x));
}

namespace detail {

// (1/N) sum_{k=-L}^{L} k^p exp(i 2 pi k d / N) by direct summation. The phase
// k*d is reduced modulo N in integer arithmetic before the trig call.
inline std::complex<double> power_sum(int power, std::int64_t d, const Lattice& lattice) {
  const std::int64_t n = lattice.n_sites();
  const std::int64_t l = lattice.half_width();
  const double two_pi_over_n = 2.0 * std::numbers::pi / static_cast<double>(n);
  double re = 0.0;
  double im = 0.0;
  for (std::int64_t k = -l; k <= l; ++k) {
    std::int64_t m = (k * d) % n;
    if (m < 0) m += n;
    const double w = std::pow(static_cast<double>(k), power);
    const double angle = two_pi_over_n * static_cast<double>(m);
    re += w * std::cos(angle);
    im += w * std::sin(angle);
  }
  return {re / static_cast<double>(n), im / static_cast<double>(n)};
}

}  // namespace detail

// F by direct spectral summation. Throws ConsistencyError if the imaginary
// residue exceeds 1e-9 N^2.
inline double kernel_f_spectral(std::int64_t d, const Lattice& lattice) {
  if (!lattice.is_odd()) throw LatticeError("spectral F is defined for odd lattices only");
  const auto sum = detail::power_sum(2, d, lattice);
  const double n = static_cast<double>(lattice.n_sites());
  if (std::abs(sum.imag()) > 1e-9 * n * n) {
    throw ConsistencyError("spectral F has imaginary residue " + std::to_string(sum.imag()) +
                           " at d=" + std::to_string(d));
  }
  return sum.real();
}

// G by direct spectral summation: i times the first-power sum.
inline double kernel_g_spectral(std::int64_t d, const Lattice& lattice) {
  if (!lattice.is_odd()) throw LatticeError("spectral G is defined for odd lattices only");
  const auto sum = detail::power_sum(1, d, lattice);
  const double n = static_cast<double>(lattice.n_sites());
  // i * (re + i im) = -im + i re; the real part of the sum is the residue.
  if (std::abs(sum.real()) > 1e-9 * n) {
    throw ConsistencyError("spectral G has imaginary residue " + std::to_string(sum.real()) +
                           " at d=" + std::to_string(d));
  }
  return -sum.imag();
}

// Tabulated kernels. Odd lattice: F on [-L, L], G on [-2L, 2L].
// Even lattice: F on [-N/2, N/2 - 1] with F(-N/2) = 0; no G table.
class KernelTable {
 public:
  KernelTable() = default;

  explicit KernelTable(const Lattice& lattice) : lattice_(lattice) {
    const std::int64_t l = lattice.half_width();
    f_min_ = lattice.min_site();
    f_values_.reserve(static_cast<std::size_t>(lattice.n_sites()));
    for (std::int64_t d = lattice.min_site(); d <= lattice.max_site(); ++d) {
      f_values_.push_back(kernel_f(d, lattice));
    }
    if (lattice.is_odd()) {
      g_values_.reserve(static_cast<std::size_t>(4 * l + 1));
      for (std::int64_t d = -2 * l; d <= 2 * l; ++d) g_values_.push_back(kernel_g(d, lattice));
    }
  }

  const Lattice& lattice() const { return lattice_; }

  double f(std::int64_t d) const { return f_values_[static_cast<std::size_t>(d - f_min_)]; }
  double g(std::int64_t d) const {
    return g_values_[static_cast<std::size_t>(d + 2 * lattice_.half_width())];
  }

  // F over the site-label range, G over [-2L, 2L].
  const std::vector<double>& f_values() const { return f_values_; }
  const std::vector<double>& g_values() const { return g_values_; }

  // F rearranged by circular offset: element o holds F(wrap(o)), o in [0, N).
  std::vector<double> circulant_f() const {
    std::vector<double> out(static_cast<std::size_t>(lattice_.n_sites()));
    for (std::size_t o = 0; o < out.size(); ++o) {
      out[o] = f(wrap_index(static_cast<Site>(o), lattice_));
    }
    return out;
  }

 private:
  Lattice lattice_;
  std::int64_t f_min_ = 0;
  std::vector<double> f_values_;
  std::vector<double> g_values_;
};

inline KernelTable build_kernel_table(const Lattice& lattice) { return KernelTable(lattice); }

}  // namespace cyclat
