#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace qot {

using cplx = std::complex<double>;

/// Odd-size symmetric lattice x_m = m·dx, k_n = n·dk for m, n = -M..M.
///
/// N = 2M+1, dx = L/N, dk = 2π/L, hence dx·dk = 2π/N. The grid is
/// "calibrated" when L² = 2πN, in which case dx = dk and the forward
/// transform prefactor L/√(2πN) equals one.
///
/// Index convention (shared by every module): public APIs speak of signed
/// node indices j ∈ [-M, M]; every length-N vector stores node j at
/// position j + M. `index()` and `node()` convert between the two.
class CenteredGrid {
 public:
  /// Throws DomainError if M < 0 or length is not a positive finite number.
  static CenteredGrid make(int M, double length);
  /// L = √(2πN).
  static CenteredGrid calibrated(int M);

  int M() const noexcept { return M_; }
  int N() const noexcept { return 2 * M_ + 1; }
  double length() const noexcept { return L_; }
  double dx() const noexcept { return dx_; }
  double dk() const noexcept { return dk_; }
  bool is_calibrated() const noexcept;

  std::size_t index(int node) const noexcept { return static_cast<std::size_t>(node + M_); }
  int node(std::size_t index) const noexcept { return static_cast<int>(index) - M_; }

  double x(int node) const noexcept { return node * dx_; }
  double k(int node) const noexcept { return node * dk_; }
  double x_at(std::size_t index) const noexcept { return x(node(index)); }
  double k_at(std::size_t index) const noexcept { return k(node(index)); }
  std::vector<double> x_nodes() const;
  std::vector<double> k_nodes() const;

  /// L/√(2πN); multiplies U in the forward transform.
  double transform_scale() const noexcept;

  friend bool operator==(const CenteredGrid&, const CenteredGrid&) = default;

 private:
  CenteredGrid(int M, double L);

  int M_;
  double L_;
  double dx_;
  double dk_;
};

/// U_{mn} = ω^{(m-M)(n-M)} / √N with ω = e^{-2πi/N}, storage indices 0..N-1.
/// Symmetric and unitary.
class UcdftMatrix {
 public:
  explicit UcdftMatrix(int N);

  /// Process-wide cache; the returned matrix is immutable.
  static std::shared_ptr<const UcdftMatrix> shared(int N);

  int size() const noexcept { return N_; }
  cplx operator()(std::size_t row, std::size_t col) const noexcept { return entries_[row * N_ + col]; }

  std::vector<cplx> apply(std::span<const cplx> v) const;
  std::vector<cplx> apply_adjoint(std::span<const cplx> v) const;

  /// max_{ij} |(U*U - I)_{ij}|
  double unitarity_defect() const;
  /// max_{ij} |U_{ij} - U_{ji}|
  double symmetry_defect() const;

  /// Copy with eps added to entry (0,0); used for fault injection.
  UcdftMatrix perturbed(double eps) const;

 private:
  int N_;
  std::vector<cplx> entries_;
};

enum class Representation { position, momentum };

/// Complex amplitudes on a grid in one representation. Amplitudes are
/// normalized w.r.t. the representation's spacing, Σ|a|²·h = 1, once passed
/// through `normalized()`; raw construction does not enforce it so that
/// linear operations can act on arbitrary vectors.
///
/// A state may carry an analytic closure a(y) of the same representation,
/// used for off-grid resampling when present.
class StateVector {
 public:
  using Closure = std::function<cplx(double)>;

  StateVector(CenteredGrid grid, std::vector<cplx> amplitudes,
              Representation representation = Representation::position, Closure closure = {});

  const CenteredGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
  Representation representation() const noexcept { return representation_; }
  const Closure& closure() const noexcept { return closure_; }
  bool has_closure() const noexcept { return static_cast<bool>(closure_); }

  std::size_t size() const noexcept { return amplitudes_.size(); }
  cplx operator[](std::size_t i) const noexcept { return amplitudes_[i]; }

  /// dx in position representation, dk in momentum representation.
  double spacing() const noexcept;
  double norm_squared() const noexcept;
  /// Throws DomainError if the norm is zero or not finite.
  StateVector normalized() const;

 private:
  CenteredGrid grid_;
  std::vector<cplx> amplitudes_;
  Representation representation_;
  Closure closure_;
};

/// g = (L/√(2πN)) U f. Input must be in position representation.
StateVector ucdft(const StateVector& state);
/// Exact inverse of ucdft. Input must be in momentum representation.
StateVector iucdft(const StateVector& state);

std::vector<cplx> ucdft(const CenteredGrid& grid, std::span<const cplx> position);
std::vector<cplx> iucdft(const CenteredGrid& grid, std::span<const cplx> momentum);

/// Band-limited (trigonometric) interpolation of position samples at an
/// arbitrary point y: (1/√(2π)) Σ_n ĝ_n e^{i y k_n} dk. Returns zero for
/// |y| beyond the outermost cell, (M + 1/2)·dx.
cplx interpolate_position(const CenteredGrid& grid, std::span<const cplx> momentum, double y);
/// Same for momentum samples at k, given position amplitudes.
cplx interpolate_momentum(const CenteredGrid& grid, std::span<const cplx> position, double k);

}  // namespace qot
