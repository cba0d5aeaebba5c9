#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles/kernel_sum.hpp"
#include "qot/costs.hpp"
#include "qot/errors.hpp"
#include "qot/states.hpp"

using namespace qot;

TEST_CASE("sampling costs") {
  const auto g3 = CenteredGrid::calibrated(1);
  const CostMatrix zero = sample_cost([](double, double) { return 0.0; }, g3);
  for (double v : zero.entries) CHECK(v == 0.0);
  CHECK(zero.lower_bound == 0.0);

  const CostMatrix c = sample_cost(x2k2_cost(), g3);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t n = 0; n < 3; ++n) {
      const double x = g3.x_at(m), k = g3.k_at(n);
      CHECK(c(m, n) == doctest::Approx(x * x * k * k));
    }
    CHECK(c(1, m) == 0.0);
    CHECK(c(m, 1) == 0.0);
  }

  const auto g = CenteredGrid::calibrated(10);
  const PhaseRegion disk = PhaseRegion::disk(g, 2.0);
  const CostMatrix chi = sample_cost([](double x, double k) { return x * x + k * k <= 4.0 ? 1.0 : 0.0; }, g);
  const CostMatrix ind = indicator_cost(disk);
  CHECK(chi.entries == ind.entries);

  CHECK_THROWS_WITH_AS(sample_cost([](double x, double) { return x > 0 ? std::nan("") : 0.0; }, g3),
                       doctest::Contains("m=1"), DomainError);
  CHECK(compose_with_J(x2k2_cost())(2.0, 3.0) == doctest::Approx(36.0));
}

TEST_CASE("Schrodinger and diagonal energies") {
  const auto g = CenteredGrid::calibrated(64);
  const StateVector h0 = hermite_state(0, g);
  const CostMatrix x2k2 = sample_cost(x2k2_cost(), g);
  CHECK(std::abs(schrodinger_energy(h0, x2k2) - 0.25) <= 1e-4);
  CHECK(std::abs(diagonal_transport_energy(h0, x2k2) - 0.75) <= 1e-3);

  const CostMatrix osc = sample_cost([](double x, double k) { return x * x + k * k; }, g);
  CHECK(std::abs(schrodinger_energy(h0, osc) - 1.0) <= 1e-4);
  CHECK(std::abs(diagonal_transport_energy(h0, osc) - schrodinger_energy(h0, osc)) <= 1e-6);

  const CostMatrix constant = sample_cost([](double, double) { return 3.5; }, g);
  CHECK(schrodinger_energy(hermite_state(4, g), constant) == doctest::Approx(3.5).epsilon(1e-14));
  const CostMatrix none = sample_cost([](double, double) { return 0.0; }, g);
  CHECK(diagonal_transport_energy(h0, none) == 0.0);

  CHECK_THROWS_AS(schrodinger_energy(hermite_state(0, CenteredGrid::calibrated(3)), x2k2), InputError);
}

TEST_CASE("FGH kernel agrees with the direct sum") {
  for (int N = 3; N <= 33; N += 2) {
    for (int s = 0; s < N; ++s) CHECK(std::abs(fgh_kernel(s, N, 1.0) - oracle::kernel_direct_sum(s, N, 1.0)) <= 1e-12);
  }
  CHECK(fgh_kernel(0, 3, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(fgh_kernel(1, 3, 1.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("FGH matrices") {
  const auto g = CenteredGrid::calibrated(7);
  PotentialProfile zero{std::vector<double>(g.N(), 0.0), 0.0, "zero"};
  const FghMatrix H = fgh_matrix(zero, g);
  const std::size_t n = H.n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(H(i, j) == H(j, i));
      if (i > 0 && j > 0) CHECK(H(i, j) == H(i - 1, j - 1));
    }

  // Prefactor identity on calibrated grids: h²/(4mL²) = h²/(8πmN)
  const double h = 2 * std::numbers::pi;
  CHECK(fgh_prefactor(g.length(), 0.5, 1.0) == doctest::Approx(h * h / (8 * std::numbers::pi * 0.5 * g.N())));

  const FghMatrix ref = fgh_reference_matrix(std::vector<double>(8, 0.0), 5.0);
  CHECK(ref.n == 8);
  CHECK_FALSE(ref.grid.has_value());
  CHECK_THROWS_AS(ground_state(ref, 1), InputError);
  const double c = fgh_prefactor(5.0, 0.5, 1.0);
  CHECK(ref(0, 0) == doctest::Approx(c * 66.0 / 6.0));
  CHECK(ref(0, 1) == doctest::Approx(-c / std::pow(std::sin(std::numbers::pi / 8), 2)));
}

TEST_CASE("FGH spectra") {
  const auto g = CenteredGrid::calibrated(64);
  PotentialProfile harmonic;
  for (double x : g.x_nodes()) harmonic.V.push_back(0.5 * x * x);
  const auto pairs = ground_state(fgh_matrix(harmonic, g, 1.0, 1.0), 5);
  for (int j = 0; j < 5; ++j) CHECK(std::abs(pairs[j].value - (j + 0.5)) <= 1e-6);
  CHECK(pairs[0].state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pairs[0].state[g.index(0)].real() > 0.0);

  // Negligible kinetic part
  PotentialProfile flat{std::vector<double>(11, 42.0), 0.0, "constant"};
  const auto flat_pairs = ground_state(fgh_matrix(flat, CenteredGrid::calibrated(5), 1.0, 1e-12), 11);
  for (const auto& p : flat_pairs) CHECK(p.value == doctest::Approx(42.0).epsilon(1e-12));

  CHECK_THROWS_AS(ground_state(fgh_matrix(harmonic, g), 0), DomainError);
}

TEST_CASE("Euler residual") {
  const auto g = CenteredGrid::calibrated(64);
  std::vector<double> V;
  for (double x : g.x_nodes()) V.push_back(x * x);
  const auto ground = ground_state(fgh_matrix(PotentialProfile{V, 0.0, "x^2"}, g), 1);
  CHECK(euler_residual(ground[0].state, separable_cost(g, V)) <= 1e-5);

  CHECK(euler_residual(hermite_state(0, g), sample_cost(x2k2_cost(), g)) <= 1e-4);
  // Every state is critical for a constant cost.
  const CostMatrix constant = sample_cost([](double, double) { return 2.0; }, g);
  CHECK(euler_residual(hermite_state(3, g), constant) <= 1e-12);
}

TEST_CASE("divergence inequality") {
  const auto g = CenteredGrid::calibrated(64);
  const ScalarFunction f{[](double t) { return 0.5 * t * t; }, [](double t) { return t; }};
  const auto X = g.x_nodes();
  const DivergenceCheck eq = divergence_inequality_check(hermite_state(0, g), f, X);
  CHECK(eq.lhs == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(eq.rhs == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(std::abs(eq.gap) <= 1e-6);

  const DivergenceCheck strict = divergence_inequality_check(hermite_state(1, g), f, X);
  CHECK(strict.gap > 1e-3);

  const DivergenceCheck zero = divergence_inequality_check(hermite_state(2, g), f, std::vector<double>(g.N(), 0.0));
  CHECK(zero.lhs >= 0.0);
  CHECK(zero.rhs == 0.0);

  std::vector<cplx> complex_amps(g.N(), cplx(0.0, 1.0));
  CHECK_THROWS_AS(divergence_inequality_check(StateVector(g, complex_amps).normalized(), f, X), InputError);
}
