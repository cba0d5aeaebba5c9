#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qot/grid.hpp"
#include "qot/region.hpp"

namespace qot {

/// Constants of the exponential escape bound
///   ν_φ(ℝ∖A) + ν_φ̂(ℝ∖B) ≥ α e^{-β η(A,B)}.
/// The defaults are placeholders for plotting only.
struct BoundParams {
  double alpha = 0.1;
  double beta = 50.0;
  int dimension = 1;
  /// Average widths (w(A), w(B)); required when dimension > 1.
  std::optional<std::pair<double, double>> widths;

  static constexpr const char* kDefaultLabel = "illustrative default";
};

/// |A||B| for d = 1; min(|A||B|, |A|^{1/d} w(B), w(A)|B|^{1/d}) otherwise.
double eta(const IntervalSet& A, const IntervalSet& B, const BoundParams& params);

/// Σ_{x_m ∈ A} p_m (closed intervals, no sub-cell correction).
double position_mass(const StateVector& state, const IntervalSet& A);
/// Σ_{k_n ∈ B} q_n.
double momentum_mass(const StateVector& state, const IntervalSet& B);

/// Grid version of a set's measure: (number of nodes in A)·spacing.
double discrete_measure(const IntervalSet& A, const CenteredGrid& grid, Representation rep);

/// 2 - ν_φ(A) - ν_φ̂(B), the escaping mass.
double nazarov_lhs(const StateVector& state, const IntervalSet& A, const IntervalSet& B);

struct SteinerResult {
  double alpha = 0.0;  // ν_φ(A)
  double beta = 0.0;   // ν_φ̂(B)
  double c1 = 0.0;
  double c2 = 0.0;
  double measure_product = 0.0;     // |A|_h·|B|_h on the grid
  double continuous_product = 0.0;  // |A|·|B|
  bool applicable = false;          // α + β > 1
  bool holds = true;                // measure_product ≥ max(c1, c2) - 1e-9
};

/// c1 = (2π/α)(√β - √(1-α))², c2 = (2π/β)(√α - √(1-β))².
SteinerResult steiner_bound(const StateVector& state, const IntervalSet& A, const IntervalSet& B);

struct MalinnikovaResult {
  double lhs = 0.0;  // count - |A|_h|B|_h
  double rhs = 0.0;  // (3/2) Σ_j (√ν_j(ℝ∖A) + √ν̂_j(ℝ∖B))
  double continuous_lhs = 0.0;
  double gram_defect = 0.0;
  bool holds = true;
};

/// States must be orthonormal on-grid (Gram defect ≤ 1e-6), else InputError.
MalinnikovaResult malinnikova_check(const std::vector<StateVector>& states, const IntervalSet& A,
                                    const IntervalSet& B);

struct MomentSum {
  double value = 0.0;
  /// value / count^{1+p/2}; zero for an empty family.
  double constant = 0.0;
};

/// Σ_j (Σ_m |x_m|^p p_m + Σ_n |k_n|^p q_n).
MomentSum moment_sum(const std::vector<StateVector>& states, double power);

// ---------------------------------------------------------------------------
// e(Λ) = sup_φ μ_φ(Λ)

/// ∫_Λ dμ_φ = Σ_{(m,n) ∈ Λ} p_m q_n.
double region_mass(const StateVector& state, const PhaseRegion& region);

struct EprobStep {
  int restart;
  int iteration;
  double objective;
  bool decreased;  // objective fell relative to the previous step
};

struct EprobResult {
  double best_value = 0.0;
  StateVector best_state;
  int best_restart = 0;
  std::vector<EprobStep> trace;  // ordered by restart, then iteration
};

struct EprobOptions {
  int max_iterations = 500;
  double tolerance = 1e-10;
  /// Worker threads; 0 means QOT_THREADS or the hardware concurrency.
  int threads = 0;
};

/// Heuristic lower estimate by the self-consistent iteration
///   X ← normalize((diag(r) + U*·diag(s)·U) X),  X = φ√dx,
/// r_m = Σ_n χ_mn q_n, s_n = Σ_m χ_mn p_m. Restart 0 starts from ψ₀, the
/// others from random states drawn from `seed`. The best state over all
/// restarts and iterations is returned; ties keep the lowest restart.
EprobResult eprob_estimate(const PhaseRegion& region, int restarts, std::uint64_t seed,
                           const EprobOptions& options = {});

/// (max(0, 1 - (α/2) e^{-β η(π₁Λ, π₂Λ)}))², with projection measures counted
/// on the grid.
double eprob_upper(const PhaseRegion& region, const BoundParams& params);

/// Number of worker threads for parallel sections: QOT_THREADS when set to
/// a positive integer, otherwise the hardware concurrency (at least 1).
int thread_budget();

// ---------------------------------------------------------------------------
// Chernoff envelopes of erfc:
//   erfc(R) ≥ ρ e^{-σR²} valid for σ > 1, 0 < ρ ≤ √(2e/π)·√(σ-1)/σ,
//   erfc(R) ≤ κ e^{-λR²} valid for κ ≥ 1, 0 < λ ≤ 1.

struct ChernoffResult {
  double erfc_value = 0.0;
  double lower_value = 0.0;  // ρ e^{-σR²}
  double upper_value = 0.0;  // κ e^{-λR²}
  bool lower_params_valid = false;
  bool upper_params_valid = false;
  bool lower_ok = false;  // parameters valid and the inequality holds at R
  bool upper_ok = false;
};

/// Largest admissible ρ for a given σ > 1.
double max_chernoff_rho(double sigma);

ChernoffResult erfc_chernoff(double R, double rho, double sigma, double kappa, double lam);

}  // namespace qot
