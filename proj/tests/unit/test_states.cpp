#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qot/costs.hpp"
#include "qot/errors.hpp"
#include "qot/states.hpp"

using namespace qot;

namespace {

double second_moment(const std::vector<double>& w, const CenteredGrid& g, bool momentum) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double y = momentum ? g.k_at(i) : g.x_at(i);
    s += y * y * w[i];
  }
  return s;
}

}  // namespace

TEST_CASE("Hermite functions") {
  const auto g = CenteredGrid::calibrated(64);
  const StateVector h0 = hermite_state(0, g);
  const std::size_t c = g.index(0);
  for (std::size_t i = 0; i < h0.size(); ++i) {
    CHECK(h0[i].real() > 0.0);
    CHECK(h0[i].real() == doctest::Approx(h0[2 * c - i].real()).epsilon(1e-14));
  }
  CHECK(h0[c].real() == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-12));

  const StateVector h1 = hermite_state(1, g);
  CHECK(std::abs(h1[c]) == 0.0);
  for (std::size_t i = 0; i < c; ++i) CHECK(h1[i].real() == doctest::Approx(-h1[2 * c - i].real()).epsilon(1e-14));

  // Gram matrix by direct summation
  std::vector<StateVector> family;
  for (int j = 0; j < 10; ++j) family.push_back(hermite_state(j, g));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      double dot = 0.0;
      for (std::size_t m = 0; m < family[i].size(); ++m) dot += family[i][m].real() * family[j][m].real();
      worst = std::max(worst, std::abs(dot * g.dx() - (i == j ? 1.0 : 0.0)));
    }
  }
  CHECK(worst <= 1e-8);

  CHECK_THROWS_AS(hermite_state(kMaxHermiteOrder + 1, g), DomainError);
  CHECK_THROWS_AS(hermite_state(-1, g), DomainError);
}

TEST_CASE("p-field construction") {
  const auto g = CenteredGrid::make(96, 16.0);
  SUBCASE("linear field gives the Gaussian and V = x^2") {
    const auto x = g.x_nodes();
    const auto r = from_p_field(x, 1.0, g);
    const StateVector h0 = hermite_state(0, g);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(std::abs(r.state[i] - h0[i]) <= 1e-3);
      if (i > 0 && i + 1 < x.size()) CHECK(r.potential.V[i] == doctest::Approx(x[i] * x[i]).epsilon(1e-9));
    }
  }
  SUBCASE("sinh field gives V = cosh(cosh - 1) with ground energy 1") {
    std::vector<double> p(g.N());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::sinh(g.x_at(i));
    const auto r = from_p_field(p, 1.0, g);
    for (std::size_t i = 10; i + 10 < p.size(); i += 7) {
      const double x = g.x_at(i);
      CHECK(r.potential.V[i] == doctest::Approx(std::cosh(x) * (std::cosh(x) - 1.0)).epsilon(2e-3));
      // φ ∝ exp(-cosh x)
      const double ratio = r.state[i].real() / r.state[g.index(0)].real();
      CHECK(ratio == doctest::Approx(std::exp(1.0 - std::cosh(x))).epsilon(1e-2));
    }
    const auto pairs = ground_state(fgh_matrix(r.potential, g), 1);
    CHECK(std::abs(pairs[0].value - 1.0) <= 5e-3);
  }
  SUBCASE("overflow names the node") {
    std::vector<double> p(g.N());
    std::vector<double> huge(g.N(), 1e308);
    CHECK_THROWS_AS(from_p_field(huge, 1.0, g), DomainError);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = -std::exp(3.0 * std::abs(g.x_at(i)));
    CHECK_NOTHROW(from_p_field(p, 1.0, g));
    p[0] = std::nan("");
    CHECK_THROWS_WITH_AS(from_p_field(p, 1.0, g), doctest::Contains("node -96"), DomainError);
  }
}

TEST_CASE("marginals") {
  const auto g = CenteredGrid::calibrated(64);
  const auto m = marginals(hermite_state(0, g));
  double worst = 0.0, sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < m.p.size(); ++i) {
    worst = std::max(worst, std::abs(m.p[i] - m.q[i]));
    sp += m.p[i];
    sq += m.q[i];
  }
  CHECK(worst <= 1e-8);
  CHECK(sp == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sq == doctest::Approx(1.0).epsilon(1e-13));

  // q is even for even real states
  const auto m2 = marginals(hermite_state(2, g));
  const std::size_t n = m2.q.size();
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(m2.q[i] - m2.q[n - 1 - i]) <= 1e-10);

  std::vector<cplx> delta(g.N(), 0.0);
  delta[g.index(0)] = 1.0;
  const auto md = marginals(StateVector(g, delta).normalized());
  CHECK(md.p[g.index(0)] == doctest::Approx(1.0));
  for (double q : md.q) CHECK(q == doctest::Approx(1.0 / g.N()).epsilon(1e-12));
}

TEST_CASE("scaling") {
  const auto g = CenteredGrid::calibrated(128);
  const StateVector h0 = hermite_state(0, g);
  const StateVector same = scale_state(h0, 1.0);
  for (std::size_t i = 0; i < h0.size(); ++i) CHECK(std::abs(same[i] - h0[i]) <= 1e-14);

  for (bool interpolated : {false, true}) {
    const StateVector s = interpolated ? scale_state_interpolated(h0, 2.0) : scale_state(h0, 2.0);
    const auto m0 = marginals(h0), m1 = marginals(s);
    CHECK(second_moment(m1.p, g, false) == doctest::Approx(second_moment(m0.p, g, false) / 4).epsilon(1e-4));
    CHECK(second_moment(m1.q, g, true) == doctest::Approx(second_moment(m0.q, g, true) * 4).epsilon(1e-4));
  }
  CHECK_THROWS_AS(scale_state(h0, 0.0), DomainError);
  CHECK_THROWS_AS(scale_state(h0, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("spectral derivative of a Gaussian") {
  const auto g = CenteredGrid::calibrated(64);
  const StateVector h0 = hermite_state(0, g);
  const auto d = spectral_derivative(h0);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(d[i] + g.x_at(i) * h0[i]) <= 1e-10);
}

TEST_CASE("random states are normalized and reproducible") {
  const auto g = CenteredGrid::calibrated(32);
  Rng a(5), b(5);
  const StateVector s = random_state(g, a), t = random_state(g, b);
  CHECK(s.norm_squared() == doctest::Approx(1.0));
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == t[i]);
}
