#include "qot/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "qot/errors.hpp"

namespace qot {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_size(const CenteredGrid& grid, std::size_t n) {
  if (n != static_cast<std::size_t>(grid.N())) {
    throw InputError("vector length " + std::to_string(n) + " does not match grid size " +
                     std::to_string(grid.N()));
  }
}

}  // namespace

CenteredGrid::CenteredGrid(int M, double L)
    : M_(M), L_(L), dx_(L / (2 * M + 1)), dk_(kTwoPi / L) {}

CenteredGrid CenteredGrid::make(int M, double length) {
  if (M < 0) throw DomainError("grid half-size M must be nonnegative, got " + std::to_string(M));
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("grid length must be positive and finite");
  }
  return CenteredGrid(M, length);
}

CenteredGrid CenteredGrid::calibrated(int M) {
  if (M < 0) throw DomainError("grid half-size M must be nonnegative, got " + std::to_string(M));
  return CenteredGrid(M, std::sqrt(kTwoPi * (2 * M + 1)));
}

bool CenteredGrid::is_calibrated() const noexcept {
  return std::abs(L_ * L_ - kTwoPi * N()) <= 1e-12 * L_ * L_ && std::abs(dx_ - dk_) <= 1e-12;
}

std::vector<double> CenteredGrid::x_nodes() const {
  std::vector<double> out(N());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x_at(i);
  return out;
}

std::vector<double> CenteredGrid::k_nodes() const {
  std::vector<double> out(N());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = k_at(i);
  return out;
}

double CenteredGrid::transform_scale() const noexcept { return L_ / std::sqrt(kTwoPi * N()); }

// ---------------------------------------------------------------------------

UcdftMatrix::UcdftMatrix(int N) : N_(N), entries_(static_cast<std::size_t>(N) * N) {
  if (N < 1 || N % 2 == 0) throw DomainError("UCDFT size must be odd and positive");
  const int M = (N - 1) / 2;
  // Exponents are reduced mod N before evaluating the root of unity.
  std::vector<cplx> roots(N);
  for (int r = 0; r < N; ++r) roots[r] = std::polar(1.0, -kTwoPi * r / N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      long long e = static_cast<long long>(a - M) * (b - M) % N;
      if (e < 0) e += N;
      entries_[static_cast<std::size_t>(a) * N + b] = roots[e] * scale;
    }
  }
}

std::shared_ptr<const UcdftMatrix> UcdftMatrix::shared(int N) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const UcdftMatrix>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[N];
  if (!slot) slot = std::make_shared<const UcdftMatrix>(N);
  return slot;
}

std::vector<cplx> UcdftMatrix::apply(std::span<const cplx> v) const {
  std::vector<cplx> out(N_);
  for (int i = 0; i < N_; ++i) {
    const cplx* row = &entries_[static_cast<std::size_t>(i) * N_];
    cplx acc{};
    for (int j = 0; j < N_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

std::vector<cplx> UcdftMatrix::apply_adjoint(std::span<const cplx> v) const {
  // (U*)_{ij} = conj(U_{ji}) = conj(U_{ij}) by symmetry.
  std::vector<cplx> out(N_);
  for (int i = 0; i < N_; ++i) {
    const cplx* row = &entries_[static_cast<std::size_t>(i) * N_];
    cplx acc{};
    for (int j = 0; j < N_; ++j) acc += std::conj(row[j]) * v[j];
    out[i] = acc;
  }
  return out;
}

double UcdftMatrix::unitarity_defect() const {
  const std::size_t n = N_;
  std::vector<cplx> product(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx* row = &entries_[k * n];
    for (std::size_t i = 0; i < n; ++i) {
      const cplx a = std::conj(row[i]);
      cplx* out = &product[i * n];
      for (std::size_t j = 0; j < n; ++j) out[j] += a * row[j];
    }
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx target = (i == j) ? cplx{1.0, 0.0} : cplx{};
      defect = std::max(defect, std::abs(product[i * n + j] - target));
    }
  }
  return defect;
}

double UcdftMatrix::symmetry_defect() const {
  double defect = 0.0;
  for (int i = 0; i < N_; ++i)
    for (int j = i + 1; j < N_; ++j) defect = std::max(defect, std::abs((*this)(i, j) - (*this)(j, i)));
  return defect;
}

UcdftMatrix UcdftMatrix::perturbed(double eps) const {
  UcdftMatrix copy = *this;
  copy.entries_[0] += eps;
  return copy;
}

// ---------------------------------------------------------------------------

StateVector::StateVector(CenteredGrid grid, std::vector<cplx> amplitudes, Representation representation,
                         Closure closure)
    : grid_(grid),
      amplitudes_(std::move(amplitudes)),
      representation_(representation),
      closure_(std::move(closure)) {
  require_same_size(grid_, amplitudes_.size());
}

double StateVector::spacing() const noexcept {
  return representation_ == Representation::position ? grid_.dx() : grid_.dk();
}

double StateVector::norm_squared() const noexcept {
  double s = 0.0;
  for (const cplx& a : amplitudes_) s += std::norm(a);
  return s * spacing();
}

StateVector StateVector::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw DomainError("state cannot be normalized (norm is zero or not finite)");
  const double scale = 1.0 / std::sqrt(n2);
  std::vector<cplx> out(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), out.begin(), [&](cplx a) { return a * scale; });
  Closure closure;
  if (closure_) closure = [inner = closure_, scale](double y) { return inner(y) * scale; };
  return StateVector(grid_, std::move(out), representation_, std::move(closure));
}

std::vector<cplx> ucdft(const CenteredGrid& grid, std::span<const cplx> position) {
  require_same_size(grid, position.size());
  auto out = UcdftMatrix::shared(grid.N())->apply(position);
  const double scale = grid.transform_scale();
  for (cplx& v : out) v *= scale;
  return out;
}

std::vector<cplx> iucdft(const CenteredGrid& grid, std::span<const cplx> momentum) {
  require_same_size(grid, momentum.size());
  auto out = UcdftMatrix::shared(grid.N())->apply_adjoint(momentum);
  const double scale = 1.0 / grid.transform_scale();
  for (cplx& v : out) v *= scale;
  return out;
}

StateVector ucdft(const StateVector& state) {
  if (state.representation() != Representation::position) {
    throw InputError("ucdft expects a position-representation state");
  }
  return StateVector(state.grid(), ucdft(state.grid(), state.amplitudes()), Representation::momentum);
}

StateVector iucdft(const StateVector& state) {
  if (state.representation() != Representation::momentum) {
    throw InputError("iucdft expects a momentum-representation state");
  }
  return StateVector(state.grid(), iucdft(state.grid(), state.amplitudes()), Representation::position);
}

cplx interpolate_position(const CenteredGrid& grid, std::span<const cplx> momentum, double y) {
  require_same_size(grid, momentum.size());
  if (std::abs(y) > (grid.M() + 0.5) * grid.dx()) return {};
  cplx acc{};
  for (std::size_t n = 0; n < momentum.size(); ++n) acc += momentum[n] * std::polar(1.0, y * grid.k_at(n));
  return acc * (grid.dk() / std::sqrt(kTwoPi));
}

cplx interpolate_momentum(const CenteredGrid& grid, std::span<const cplx> position, double k) {
  require_same_size(grid, position.size());
  if (std::abs(k) > (grid.M() + 0.5) * grid.dk()) return {};
  cplx acc{};
  for (std::size_t m = 0; m < position.size(); ++m) acc += position[m] * std::polar(1.0, -k * grid.x_at(m));
  return acc * (grid.dx() / std::sqrt(kTwoPi));
}

}  // namespace qot
