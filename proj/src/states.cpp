#include "qot/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qot/errors.hpp"

namespace qot {

double hermite_function(int order, double x) {
  if (order < 0 || order > kMaxHermiteOrder) {
    throw DomainError("Hermite order must lie in [0, " + std::to_string(kMaxHermiteOrder) + "], got " +
                      std::to_string(order));
  }
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int m = 0; m < order; ++m) {
    const double next = std::sqrt(2.0 / (m + 1)) * x * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

StateVector hermite_state(int order, const CenteredGrid& grid) {
  hermite_function(order, 0.0);  // order validation
  std::vector<cplx> amps(grid.N());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = hermite_function(order, grid.x_at(i));
  StateVector::Closure closure = [order](double y) { return cplx{hermite_function(order, y), 0.0}; };
  return StateVector(grid, std::move(amps), Representation::position, std::move(closure)).normalized();
}

PFieldResult from_p_field(std::span<const double> p, double lambda, const CenteredGrid& grid) {
  const std::size_t n = grid.N();
  if (p.size() != n) throw InputError("p-field length does not match grid size");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p[i])) {
      throw DomainError("p-field is not finite at node " + std::to_string(grid.node(i)));
    }
  }
  const double dx = grid.dx();
  const std::size_t center = grid.index(0);

  // Cumulative trapezoid anchored at x = 0.
  std::vector<double> integral(n, 0.0);
  for (std::size_t i = center + 1; i < n; ++i) integral[i] = integral[i - 1] + 0.5 * (p[i - 1] + p[i]) * dx;
  for (std::size_t i = center; i-- > 0;) integral[i] = integral[i + 1] - 0.5 * (p[i] + p[i + 1]) * dx;

  // The additive constant is absorbed into the normalization; shifting by the
  // minimum keeps every exponent ≤ 0.
  const double floor = *std::min_element(integral.begin(), integral.end());
  std::vector<cplx> amps(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = -(integral[i] - floor);
    if (!std::isfinite(e)) {
      throw DomainError("exp(-∫p) overflows at node " + std::to_string(grid.node(i)));
    }
    amps[i] = std::exp(e);
  }

  std::vector<double> dp(n, 0.0);
  if (n >= 3) {
    for (std::size_t i = 1; i + 1 < n; ++i) dp[i] = (p[i + 1] - p[i - 1]) / (2.0 * dx);
    dp[0] = (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * dx);
    dp[n - 1] = (3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) / (2.0 * dx);
  }

  PotentialProfile potential;
  potential.lambda = lambda;
  potential.description = "generated from p-field: V = p^2 - p' + lambda";
  potential.V.resize(n);
  for (std::size_t i = 0; i < n; ++i) potential.V[i] = p[i] * p[i] - dp[i] + lambda;

  StateVector state = StateVector(grid, std::move(amps)).normalized();
  return {std::move(state), std::move(potential)};
}

std::vector<double> weights(std::span<const cplx> amplitudes, double h) {
  std::vector<double> w(amplitudes.size());
  std::transform(amplitudes.begin(), amplitudes.end(), w.begin(), [h](cplx a) { return std::norm(a) * h; });
  return w;
}

MarginalPair marginals(const StateVector& state) {
  const CenteredGrid& g = state.grid();
  if (state.representation() == Representation::position) {
    return {g, weights(state.amplitudes(), g.dx()), weights(ucdft(g, state.amplitudes()), g.dk())};
  }
  return {g, weights(iucdft(g, state.amplitudes()), g.dx()), weights(state.amplitudes(), g.dk())};
}

namespace {

void require_scale(const StateVector& state, double lam) {
  if (!(lam > 0.0) || !std::isfinite(lam)) throw DomainError("scale factor must be positive and finite");
  if (state.representation() != Representation::position) {
    throw InputError("scale_state expects a position-representation state");
  }
}

StateVector normalize_scaled(StateVector scaled, double lam) {
  try {
    return scaled.normalized();
  } catch (const DomainError&) {
    throw DomainError("scaled state underflows to an unnormalizable vector (lambda = " + std::to_string(lam) + ")");
  }
}

}  // namespace

StateVector scale_state_interpolated(const StateVector& state, double lam) {
  require_scale(state, lam);
  const CenteredGrid& g = state.grid();
  const auto spectrum = ucdft(g, state.amplitudes());
  const double root = std::sqrt(lam);
  std::vector<cplx> amps(g.N());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = root * interpolate_position(g, spectrum, lam * g.x_at(i));
  return normalize_scaled(StateVector(g, std::move(amps)), lam);
}

StateVector scale_state(const StateVector& state, double lam) {
  require_scale(state, lam);
  if (!state.has_closure()) return scale_state_interpolated(state, lam);
  const CenteredGrid& g = state.grid();
  const double root = std::sqrt(lam);
  StateVector::Closure closure = [inner = state.closure(), lam, root](double y) { return root * inner(lam * y); };
  std::vector<cplx> amps(g.N());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = closure(g.x_at(i));
  return normalize_scaled(StateVector(g, std::move(amps), Representation::position, std::move(closure)), lam);
}

std::vector<cplx> spectral_derivative(const StateVector& state) {
  if (state.representation() != Representation::position) {
    throw InputError("spectral_derivative expects a position-representation state");
  }
  const CenteredGrid& g = state.grid();
  auto spectrum = ucdft(g, state.amplitudes());
  for (std::size_t n = 0; n < spectrum.size(); ++n) spectrum[n] *= cplx{0.0, g.k_at(n)};
  return iucdft(g, spectrum);
}

}  // namespace qot

namespace qot {

StateVector random_state(const CenteredGrid& grid, Rng& rng, int orders) {
  if (orders < 1 || orders > kMaxHermiteOrder + 1) throw DomainError("number of Hermite orders out of range");
  std::vector<cplx> amps(grid.N());
  for (int j = 0; j < orders; ++j) {
    const double re = rng.normal();
    const cplx c(re, rng.normal());
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += c * hermite_function(j, grid.x_at(i));
  }
  return StateVector(grid, std::move(amps)).normalized();
}

}  // namespace qot
