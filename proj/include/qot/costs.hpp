#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qot/grid.hpp"
#include "qot/region.hpp"
#include "qot/states.hpp"

namespace qot {

using CostFunction = std::function<double(double x, double k)>;

/// H(x_m, k_n) on the phase grid, row-major with rows indexed by x-nodes.
struct CostMatrix {
  CenteredGrid grid;
  std::vector<double> entries;
  double lower_bound = 0.0;

  double operator()(std::size_t m, std::size_t n) const noexcept { return entries[m * grid.N() + n]; }
};

/// Entrywise evaluation; throws DomainError naming the first non-finite node.
CostMatrix sample_cost(const CostFunction& h, const CenteredGrid& grid);

/// kinetic·k_n² + V_m.
CostMatrix separable_cost(const CenteredGrid& grid, std::span<const double> potential, double kinetic = 1.0);
/// 0/1 indicator of a phase region.
CostMatrix indicator_cost(const PhaseRegion& region);

/// x²k²
CostFunction x2k2_cost();
/// (H∘J)(x, k) = H(k, -x)
CostFunction compose_with_J(CostFunction h);

/// Σ_{mn} H_{mn} p_m q_n
double schrodinger_energy(const MarginalPair& marg, const CostMatrix& cost);
double schrodinger_energy(const StateVector& state, const CostMatrix& cost);

/// Σ_m H_{mm} p_m, the energy of the identity transport plan (Id × Id)_# ν_φ.
double diagonal_transport_energy(const StateVector& state, const CostMatrix& cost);

// ---------------------------------------------------------------------------
// Fourier grid Hamiltonian

enum class FghVariant { odd, reference };

struct FghMatrix {
  std::optional<CenteredGrid> grid;  // empty for the reference (even-N) variant
  std::size_t n = 0;
  std::vector<double> entries;  // row-major n×n
  FghVariant variant = FghVariant::odd;
  double mass = 0.5;
  double hbar = 1.0;

  double operator()(std::size_t i, std::size_t j) const noexcept { return entries[i * n + j]; }
};

/// h²/(4mL²) with h = 2πħ; equals h²/(8πmN) when L² = 2πN.
double fgh_prefactor(double length, double mass, double hbar);

/// κ_N(s) = (α/N) Σ_{j=1..N} (j-(N+1)/2)² ω^{(j-(N+1)/2)s} in closed form.
double fgh_kernel(int s, int N, double alpha);

/// Kinetic (ħ²/2m)k² plus V on an odd centered grid, exact representation
/// of the discrete separable energy in the basis X = φ√dx.
FghMatrix fgh_matrix(const PotentialProfile& potential, const CenteredGrid& grid, double mass = 0.5,
                     double hbar = 1.0);

/// The even-N reference formula with diagonal (N²+2)/6 and off-diagonal
/// (-1)^{i-j}/sin²(π(i-j)/N); any N ≥ 1.
FghMatrix fgh_reference_matrix(std::span<const double> potential, double length, double mass = 0.5,
                               double hbar = 1.0);

struct EigenPair {
  double value;
  StateVector state;
};

/// Lowest `count` eigenpairs, ascending. Eigenvectors are normalized on-grid
/// (Σ|φ|²dx = 1) with the largest-magnitude component positive.
std::vector<EigenPair> ground_state(const FghMatrix& matrix, int count);
std::vector<EigenPair> ground_state(std::span<const double> symmetric, const CenteredGrid& grid, int count);

// ---------------------------------------------------------------------------
// Euler equation of E_H

struct EulerFields {
  std::vector<double> F;  // F_m = Σ_n H_{mn} q_n
  std::vector<double> G;  // G_n = Σ_m H_{mn} p_m
  double E0 = 0.0;
};

EulerFields euler_fields(const StateVector& state, const CostMatrix& cost);

/// r = (2E₀ - F)⊙φ - iucdft(G⊙φ̂); returns √(Σ|r_m|² dx).
double euler_residual(const StateVector& state, const CostMatrix& cost);

// ---------------------------------------------------------------------------
// Divergence (Schwarz-type) inequality
//   (Σ|φ'|²dx)(Σ|f'(φ)|²|X|²dx) ≥ (Σ f(φ) X' dx)²

struct ScalarFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // optional; central difference when empty
};

struct DivergenceCheck {
  double lhs;
  double rhs;
  double gap;
};

/// φ must be real up to 1e-12 relative. φ' is the spectral derivative.
/// `divergence` may be empty, in which case X' is taken by centered
/// differences of the samples (one-sided at the ends).
DivergenceCheck divergence_inequality_check(const StateVector& phi, const ScalarFunction& f,
                                            std::span<const double> field, std::span<const double> divergence = {});

}  // namespace qot
