#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qot/costs.hpp"
#include "qot/region.hpp"
#include "qot/states.hpp"

namespace qot {

/// Nonnegative rows×cols matrix γ with prescribed row sums p and column
/// sums q. Grid-free so that the same solver serves odd grids and the small
/// arbitrary-size instances used for cross-checks.
struct Coupling {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;  // row-major
  std::vector<double> row_marginal;
  std::vector<double> col_marginal;

  double operator()(std::size_t i, std::size_t j) const noexcept { return weights[i * cols + j]; }
  /// max over rows and columns of |Σγ - target|
  double marginal_defect() const noexcept;
  double min_weight() const noexcept;
  std::size_t support_size(double threshold = 0.0) const noexcept;
};

/// Σ_{ij} H_{ij} γ_{ij} = Tr(H γᵀ)
double coupling_cost(const Coupling& coupling, std::span<const double> cost);

struct TransportResult {
  Coupling coupling;
  double value = 0.0;           // primal objective
  std::vector<double> dual_x;   // potentials on rows (x-nodes)
  std::vector<double> dual_k;   // potentials on columns (k-nodes)
  double dual_value = 0.0;      // Σ dual_x p + Σ dual_k q
  double gap = 0.0;             // value - dual_value
  long iterations = 0;

  /// max_{ij} (dual_x_i + dual_k_j - H_ij), ≤ 0 for a feasible dual.
  double dual_infeasibility(std::span<const double> cost) const;
  /// max |H_ij - dual_x_i - dual_k_j| over cells with γ_ij > threshold.
  double slackness_violation(std::span<const double> cost, double threshold = 1e-9) const;
};

enum class PricingRule {
  dantzig_then_bland,  // most negative reduced cost; Bland's rule after a degenerate streak
  bland,               // first eligible cell in row-major order throughout
};

struct TransportOptions {
  PricingRule pricing = PricingRule::dantzig_then_bland;
  /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_streak = 64;
  /// Pivot cap; 0 selects 50·rows·cols + 1000.
  long max_iterations = 0;
  /// Row whose potential is pinned to zero.
  std::size_t dual_anchor = 0;
};

/// Transportation simplex started from the northwest-corner basis. Row and
/// column sums may disagree by up to 1e-7 (q is rescaled); larger mismatch
/// or negative masses raise InputError, exceeding the pivot cap raises
/// NumericError.
TransportResult solve_transport(std::span<const double> p, std::span<const double> q, std::span<const double> cost,
                                const TransportOptions& options = {});

/// Discrete Kantorovich problem inf_{γ ∈ Γ(φ)} Tr(H γᵀ); dual_x is pinned
/// to zero at the center node.
TransportResult kantorovich(const MarginalPair& marg, const CostMatrix& cost, TransportOptions options = {});

/// γ_{mn} = p_m q_n
Coupling product_coupling(const MarginalPair& marg);

// ---------------------------------------------------------------------------
// One-dimensional Monge rearrangement

/// Values T(x_m) of a map from x-nodes into the momentum axis.
struct MongeMap {
  CenteredGrid grid;
  std::vector<double> map_values;
  bool monotone = true;
};

/// Whether map_values are non-decreasing up to 1e-12.
bool is_monotone(std::span<const double> values);

/// T(x_m) = G⁻¹(F(x_m)), F(x_m) = Σ_{j≤m} p_j, G the piecewise-linear CDF of
/// q through (k_{-M} - dk, 0) and (k_n, Σ_{j≤n} q_j), and
/// G⁻¹(s) = inf{t : G(t) ≥ s}. Tails are evaluated through survival sums so
/// small masses keep full relative precision.
MongeMap monge_rearrangement(const MarginalPair& marg);

/// Σ_m h(x_m, T(x_m)) p_m
double monge_cost(const MongeMap& map, const MarginalPair& marg, const CostFunction& h);

/// max_m |G(T(x_m)) - F(x_m)| with F, G as in monge_rearrangement.
double pushforward_defect(const MongeMap& map, const MarginalPair& marg);

/// max |T(x_m) - x_m| over nodes with p_m ≥ mass_floor.
double identity_deviation(const MongeMap& map, const MarginalPair& marg, double mass_floor = 1e-16);

// ---------------------------------------------------------------------------
// inf_γ γ(U) = sup_A { p(A) - q(A_U) },  A_U = {n : ∃ m ∈ A, (m, n) ∉ U}

struct StrassenResult {
  double lp_value = 0.0;
  std::uint32_t best_set = 0;  // bit m set ⇔ row m ∈ A
  std::uint32_t best_image = 0;  // bit n set ⇔ column n ∈ A_U
  double sup_value = 0.0;
};

inline constexpr std::size_t kMaxStrassenSize = 16;

/// `in_region` is row-major rows×cols, nonzero for cells in U. Throws
/// DomainError when rows exceed 16.
StrassenResult strassen_bruteforce(std::span<const double> p, std::span<const double> q,
                                   std::span<const unsigned char> in_region);
StrassenResult strassen_bruteforce(const MarginalPair& marg, const PhaseRegion& region);

}  // namespace qot
