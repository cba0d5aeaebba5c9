#pragma once

#include <vector>

#include "qot/costs.hpp"
#include "qot/grid.hpp"

namespace qot {

/// Linear map (x, k) ↦ (a x + b k, c x + d k) of the phase plane.
struct BlockMap {
  enum class Kind { diagonal, antidiagonal, general };

  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;
  Kind kind = Kind::diagonal;

  static BlockMap diagonal(double a);       // (a, 0, 0, 1/a)
  static BlockMap antidiagonal(double b);   // (0, b, -1/b, 0)
  static BlockMap J() { return antidiagonal(1.0); }
  /// Kind is inferred from the zero pattern.
  static BlockMap general(double a, double b, double c, double d);

  double determinant() const noexcept { return a * d - c * b; }
  bool is_symplectic(double tol = 1e-12) const noexcept;
};

/// Matrix product second·first (apply `first`, then `second`).
BlockMap compose(const BlockMap& second, const BlockMap& first);

/// Density sampled on the phase grid, row-major with rows indexed by ξ.
struct PhaseDensity {
  CenteredGrid grid;
  std::vector<double> values;

  double operator()(std::size_t m, std::size_t n) const noexcept { return values[m * grid.N() + n]; }
  /// Σ values·dx·dk
  double mass() const noexcept;
  double max_difference(const PhaseDensity& other) const;
};

/// |φ(x_m)|²|φ̂(k_n)|² on the grid nodes.
PhaseDensity product_density(const StateVector& state);

/// Density of the image of μ_φ under the map:
///   (ξ, η) ↦ |φ(dξ - bη)|²·|φ̂(-cξ + aη)|²,
/// off-grid values by band-limited interpolation. InputError if the map is
/// not symplectic.
PhaseDensity pushforward_density(const StateVector& state, const BlockMap& map);

struct SubgroupIdentity {
  double defect;
  BlockMap::Kind which;
};

/// Diagonal maps: compared with the product density of φ scaled by 1/a.
/// Antidiagonal maps: compared with the product density of the Fourier
/// transform of φ scaled by b. Scale factors must be positive; general maps
/// raise UnsupportedError.
SubgroupIdentity verify_subgroup_identity(const StateVector& state, const BlockMap& map);

/// φ̂ read as a position-space state (ξ ↦ φ̂(ξ)); requires a calibrated grid.
StateVector fourier_as_position(const StateVector& state);

}  // namespace qot
