#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "cyclat/error.hpp"
#include "cyclat/evolution.hpp"
#include "cyclat/observables.hpp"
#include "support.hpp"

using namespace cyclat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FieldState plane_wave(const Lattice& lat, std::int64_t k0) {
  std::vector<std::complex<double>> c(static_cast<std::size_t>(lat.n_sites()));
  const double n = static_cast<double>(lat.n_sites());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = std::polar(1.0 / std::sqrt(n),
                      2.0 * std::numbers::pi * static_cast<double>(k0 * lat.site_at(i)) / n);
  }
  return FieldState::from_coefficients(lat, c);
}

}  // namespace

TEST_CASE("drift velocity of real states vanishes", "[observables]") {
  const Lattice lat = make_lattice(101, 1.0);
  const KernelTable kernels = build_kernel_table(lat);
  FieldState s = test::random_unnormalized(lat, 4);
  s = FieldState(lat, std::vector<double>(s.a().begin(), s.a().end()), std::vector<double>(101, 0.0));
  CHECK(drift_velocity(s, kernels) == 0.0);
  CHECK_THAT(momentum_expectation(s, kernels), WithinAbs(0.0, 1e-12));
  CHECK_THAT(momentum_expectation_spectral(s), WithinAbs(0.0, 1e-12));
}

TEST_CASE("boosted packets drift at the quantized velocity", "[observables]") {
  const Lattice lat = make_lattice(801, 1.0);
  const KernelTable kernels = build_kernel_table(lat);
  const double g = lat.reciprocal_constant();
  CHECK_THAT(drift_velocity(gaussian_state(lat, 0, 10.0, 50), kernels), WithinAbs(2.0 * g * 50.0, 1e-6));
  CHECK_THAT(drift_velocity(uniform_state(lat, 0, 25, 10), kernels), WithinRel(2.0 * g * 10.0, 1e-2));

  const FieldState rest = gaussian_state(lat, 0, 10.0, 0);
  const double v = quantized_velocity(lat, 20);
  CHECK_THAT(drift_velocity(boost(rest, v), kernels) - drift_velocity(rest, kernels), WithinAbs(v, 1e-6));
}

TEST_CASE("uniform window drift includes tail wrap-around", "[observables]") {
  // the sinc-shaped spectrum of a window reaches the band edge, so a boost by
  // m slots carries the top m slots of its tail around to negative momenta
  const Lattice lat = make_lattice(801, 1.0);
  const KernelTable kernels = build_kernel_table(lat);
  const double g = lat.reciprocal_constant();
  const auto rest = momentum_distribution(uniform_state(lat, 0, 25, 0));
  double predicted = 0.0;
  for (std::size_t j = 0; j < rest.size(); ++j) {
    std::int64_t k = static_cast<std::int64_t>(j) - 400 + 10;
    if (k > 400) k -= 801;
    predicted += 2.0 * g * static_cast<double>(k) * rest[j];
  }
  CHECK_THAT(drift_velocity(uniform_state(lat, 0, 25, 10), kernels), WithinAbs(predicted, 1e-12));
}

TEST_CASE("plane waves are momentum eigenstates", "[observables]") {
  const Lattice lat = make_lattice(21, 1.0);
  const KernelTable kernels = build_kernel_table(lat);
  for (std::int64_t k0 : {-10, -3, 0, 1, 7, 10}) {
    const FieldState w = plane_wave(lat, k0);
    const double p = lat.reciprocal_constant() * static_cast<double>(k0);
    INFO("k0=" << k0);
    REQUIRE_THAT(momentum_expectation(w, kernels), WithinAbs(p, 1e-10));
    REQUIRE_THAT(momentum_expectation_spectral(w), WithinAbs(p, 1e-10));
    const auto dist = momentum_distribution(w);
    for (std::size_t j = 0; j < dist.size(); ++j) {
      const double expected = static_cast<std::int64_t>(j) - 10 == k0 ? 1.0 : 0.0;
      REQUIRE_THAT(dist[j], WithinAbs(expected, 1e-12));
    }
  }
}

TEST_CASE("drift velocity is twice the momentum expectation", "[observables][property]") {
  for (std::int64_t n : {3, 21, 101}) {
    const Lattice lat = make_lattice(n, 1.0);
    const KernelTable kernels = build_kernel_table(lat);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const FieldState s = normalize(test::random_unnormalized(lat, seed));
      const double v = drift_velocity(s, kernels);
      const double p = momentum_expectation(s, kernels);
      REQUIRE_THAT(v, WithinAbs(2.0 * p, 1e-10));
      REQUIRE_THAT(p, WithinAbs(momentum_expectation_spectral(s), 1e-10));
    }
  }
}

TEST_CASE("kernel-form observables need odd lattices", "[observables][errors]") {
  const Lattice even = make_even_lattice(6, 1.0);
  const KernelTable kernels = build_kernel_table(even);
  const FieldState s = test::random_unnormalized(even, 1);
  CHECK_THROWS_AS(drift_velocity(s, kernels), LatticeError);
  CHECK_THROWS_AS(momentum_expectation(s, kernels), LatticeError);
  const ObservableSnapshot snap = snapshot(0, s, kernels);
  CHECK(snap.drift_velocity == 2.0 * snap.momentum_expectation);
}

TEST_CASE("position diagnostics", "[observables]") {
  const Lattice lat = make_lattice(801, 1.0);
  CHECK(gaussian_shape_residual(gaussian_state(lat, 0, 10.0, 0)) < 1e-3);
  CHECK_THAT(position_mean(uniform_state(lat, 0, 25, 0)), WithinAbs(0.0, 1e-6));
  CHECK_THAT(position_mean(uniform_state(lat, 150, 25, 0)), WithinAbs(150.0, 1e-6));
  CHECK_THAT(position_spread(gaussian_state(lat, 0, 10.0, 0)), WithinRel(10.0, 1e-6));

  // a packet straddling the border keeps its cyclic mean and width
  const FieldState edge = gaussian_state(lat, 400, 10.0, 0);
  CHECK(std::abs(std::abs(position_mean(edge)) - 400.0) < 1e-6);
  CHECK_THAT(position_spread(edge), WithinRel(10.0, 1e-6));
  CHECK(gaussian_shape_residual(edge) < 1e-3);

  const FieldState zero = FieldState::zero(lat);
  CHECK_THROWS_AS(position_mean(zero), DegenerateStateError);
  CHECK_THROWS_AS(position_spread(zero), DegenerateStateError);
  CHECK_THROWS_AS(gaussian_shape_residual(zero), DegenerateStateError);
  const ObservableSnapshot snap = snapshot(3, zero, build_kernel_table(lat));
  CHECK(snap.step == 3);
  CHECK(snap.m_total == 0.0);
}

TEST_CASE("local maxima counting", "[observables]") {
  const std::vector<double> flat(10, 1.0);
  CHECK(local_maxima_count(flat) == 0);
  const std::vector<double> twin{0.0, 1.0, 0.0, 0.5, 0.0};
  CHECK(local_maxima_count(twin) == 2);
  const std::vector<double> tiny{0.0, 1.0, 0.0, 1e-5, 0.0};
  CHECK(local_maxima_count(tiny) == 1);
  CHECK(local_maxima_count(std::vector<double>{1.0, 0.0}) == 0);
  // the ring wraps
  const std::vector<double> wrapped{1.0, 0.0, 0.0, 0.2};
  CHECK(local_maxima_count(wrapped) == 1);
}

TEST_CASE("one-step M drift matches its exact expression", "[observables][property]") {
  const Lattice lat = make_lattice(21, 1.0);
  const KernelTable kernels = build_kernel_table(lat);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FieldState s = test::random_unnormalized(lat, seed);
    const double measured = norm_m(euler_step(s, 1e-2, kernels)) - norm_m(s);
    REQUIRE_THAT(measured, WithinRel(m_drift_exact(s, 1e-2, kernels), 1e-10));
  }
  const FieldState g = gaussian_state(make_lattice(801, 1.0), 0, 10.0, 0);
  CHECK(std::isfinite(m_drift_large_n_approximation(g, 1e-3)));
}

TEST_CASE("high-frequency fraction", "[observables]") {
  const Lattice lat = make_lattice(101, 1.0);
  CHECK(high_frequency_fraction(gaussian_state(lat, 0, 10.0, 0)) < 1e-6);
  const double noise = high_frequency_fraction(random_state(lat, 1));
  CHECK(noise > 0.2);
  CHECK(noise < 0.8);
}
