#include <doctest.h>

#include <cmath>

#include "qot/errors.hpp"
#include "qot/random.hpp"
#include "qot/states.hpp"
#include "qot/symplectic.hpp"

using namespace qot;

TEST_CASE("block maps") {
  CHECK(BlockMap::diagonal(2.0).is_symplectic());
  CHECK(BlockMap::J().kind == BlockMap::Kind::antidiagonal);
  CHECK(BlockMap::general(1, 1, 0, 1).kind == BlockMap::Kind::general);
  CHECK_FALSE(BlockMap::general(2, 0, 0, 2).is_symplectic());
  const BlockMap JJ = compose(BlockMap::J(), BlockMap::J());
  CHECK(JJ.a == -1.0);
  CHECK(JJ.d == -1.0);
  CHECK_THROWS_AS(BlockMap::diagonal(0.0), DomainError);
}

TEST_CASE("pushforward densities") {
  const auto g = CenteredGrid::calibrated(48);
  const StateVector phi = hermite_state(0, g);
  const PhaseDensity base = product_density(phi);
  CHECK(pushforward_density(phi, BlockMap::diagonal(1.0)).max_difference(base) <= 1e-13);
  CHECK(base.mass() == doctest::Approx(1.0).epsilon(1e-12));

  // J maps the density to q(ξ) p(-η)
  const StateVector h1 = hermite_state(1, g);
  const PhaseDensity j = pushforward_density(h1, BlockMap::J());
  const auto m = marginals(h1);
  const std::size_t n = g.N();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      worst = std::max(worst, std::abs(j(a, b) - m.q[a] / g.dk() * m.p[n - 1 - b] / g.dx()));
  CHECK(worst <= 1e-12);

  const PhaseDensity shear = pushforward_density(phi, BlockMap::general(1, 0.5, 0, 1));
  CHECK(std::abs(shear.mass() - 1.0) <= 1e-3);
  CHECK_THROWS_AS(pushforward_density(phi, BlockMap::general(2, 0, 0, 2)), InputError);
}

TEST_CASE("subgroup identities") {
  const auto g = CenteredGrid::calibrated(64);
  const StateVector phi = hermite_state(0, g);
  CHECK(verify_subgroup_identity(phi, BlockMap::diagonal(1.0)).defect <= 1e-12);
  CHECK(verify_subgroup_identity(phi, BlockMap::diagonal(2.0)).defect <= 1e-4);
  CHECK(verify_subgroup_identity(phi, BlockMap::J()).defect <= 1e-4);
  const SubgroupIdentity anti = verify_subgroup_identity(hermite_state(2, g), BlockMap::antidiagonal(2.0));
  CHECK(anti.which == BlockMap::Kind::antidiagonal);
  CHECK(anti.defect <= 1e-4);
  CHECK_THROWS_AS(verify_subgroup_identity(phi, BlockMap::general(1, 1, 0, 1)), UnsupportedError);

  // Composition of diagonal maps
  const BlockMap a = BlockMap::diagonal(1.5), b = BlockMap::diagonal(0.8);
  const PhaseDensity two_steps = pushforward_density(scale_state(phi, 1 / 1.5), b);
  const PhaseDensity one_step = pushforward_density(phi, compose(b, a));
  CHECK(two_steps.max_difference(one_step) <= 1e-4);
}

TEST_CASE("J energy identity") {
  const auto g = CenteredGrid::calibrated(32);
  Rng rng(4);
  const auto h = [](double x, double k) { return x * x * k + std::cos(k) - 0.5 * x; };
  const CostMatrix H = sample_cost(h, g), HJ = sample_cost(compose_with_J(h), g);
  for (int t = 0; t < 5; ++t) {
    const StateVector phi = random_state(g, rng);
    CHECK(std::abs(schrodinger_energy(phi, HJ) - schrodinger_energy(fourier_as_position(phi), H)) <= 1e-10);
  }
  CHECK_THROWS_AS(fourier_as_position(hermite_state(0, CenteredGrid::make(8, 3.0))), InputError);
}

TEST_CASE("x^2 + k^2 is minimized by the ground state among Hermite functions") {
  const auto g = CenteredGrid::calibrated(64);
  const CostMatrix H = sample_cost([](double x, double k) { return x * x + k * k; }, g);
  int best = -1;
  double best_value = 1e300;
  for (int j = 0; j < 10; ++j) {
    const double e = schrodinger_energy(hermite_state(j, g), H);
    if (e < best_value) {
      best_value = e;
      best = j;
    }
  }
  CHECK(best == 0);
}
