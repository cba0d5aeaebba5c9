#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qot/grid.hpp"
#include "qot/random.hpp"

namespace qot {

/// Discrete marginals of a state: p_m = |φ_m|²dx, q_n = |φ̂_n|²dk.
struct MarginalPair {
  CenteredGrid grid;
  std::vector<double> p;
  std::vector<double> q;
};

/// Potential V sampled on x-nodes together with the eigenvalue shift λ it
/// was generated for.
struct PotentialProfile {
  std::vector<double> V;
  double lambda = 0.0;
  std::string description;
};

inline constexpr int kMaxHermiteOrder = 60;

/// Value of the normalized Hermite function ψ_order(x), via the stable
/// three-term recurrence.
double hermite_function(int order, double x);

/// ψ_order sampled on the grid and renormalized on-grid. Carries ψ_order as
/// its analytic closure. Throws DomainError for order outside [0, 60].
StateVector hermite_state(int order, const CenteredGrid& grid);

struct PFieldResult {
  StateVector state;
  PotentialProfile potential;
};

/// Ground state φ ∝ exp(-∫₀ˣ p) and potential V = p² - p' + λ generated by a
/// field p sampled on the x-nodes.
PFieldResult from_p_field(std::span<const double> p_values, double lambda, const CenteredGrid& grid);

MarginalPair marginals(const StateVector& state);

/// φ_λ(x) = √λ·φ(λx), renormalized on-grid. Uses the analytic closure when the
/// state has one, band-limited interpolation otherwise.
StateVector scale_state(const StateVector& state, double lam);

/// Band-limited path only, regardless of any closure.
StateVector scale_state_interpolated(const StateVector& state, double lam);

/// Spectral derivative iucdft(i·k·ucdft(φ)) of a position-space state.
std::vector<cplx> spectral_derivative(const StateVector& state);

/// Σ_{j<orders} c_j ψ_j with independent standard complex normal c_j,
/// normalized on-grid.
StateVector random_state(const CenteredGrid& grid, Rng& rng, int orders = 10);

/// Probability weights of an arbitrary (not necessarily normalized)
/// amplitude vector on spacing h.
std::vector<double> weights(std::span<const cplx> amplitudes, double h);

}  // namespace qot
