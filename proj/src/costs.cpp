#include "qot/costs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qot/errors.hpp"
#include "qot/symmetric_eigen.hpp"

namespace qot {

namespace {

void require_grid(const CenteredGrid& a, const CenteredGrid& b) {
  if (!(a == b)) throw InputError("state and cost live on different grids");
}

double min_entry(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

}  // namespace

CostMatrix sample_cost(const CostFunction& h, const CenteredGrid& grid) {
  const std::size_t n = grid.N();
  CostMatrix out{grid, std::vector<double>(n * n), 0.0};
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = h(grid.x_at(m), grid.k_at(j));
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "cost is not finite at node (m=" << grid.node(m) << ", n=" << grid.node(j) << ")";
        throw DomainError(msg.str());
      }
      out.entries[m * n + j] = v;
    }
  }
  out.lower_bound = min_entry(out.entries);
  return out;
}

CostMatrix separable_cost(const CenteredGrid& grid, std::span<const double> potential, double kinetic) {
  const std::size_t n = grid.N();
  if (potential.size() != n) throw InputError("potential length does not match grid size");
  CostMatrix out{grid, std::vector<double>(n * n), 0.0};
  for (std::size_t m = 0; m < n; ++m) {
    if (!std::isfinite(potential[m])) throw DomainError("potential is not finite at node " + std::to_string(grid.node(m)));
    for (std::size_t j = 0; j < n; ++j) {
      const double k = grid.k_at(j);
      out.entries[m * n + j] = kinetic * k * k + potential[m];
    }
  }
  out.lower_bound = min_entry(out.entries);
  return out;
}

CostMatrix indicator_cost(const PhaseRegion& region) {
  CostMatrix out{region.grid, std::vector<double>(region.mask.size()), 0.0};
  std::transform(region.mask.begin(), region.mask.end(), out.entries.begin(),
                 [](unsigned char b) { return b ? 1.0 : 0.0; });
  out.lower_bound = min_entry(out.entries);
  return out;
}

CostFunction x2k2_cost() {
  return [](double x, double k) { return x * x * k * k; };
}

CostFunction compose_with_J(CostFunction h) {
  return [h = std::move(h)](double x, double k) { return h(k, -x); };
}

double schrodinger_energy(const MarginalPair& marg, const CostMatrix& cost) {
  require_grid(marg.grid, cost.grid);
  const std::size_t n = cost.grid.N();
  double total = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double* row = &cost.entries[m * n];
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * marg.q[j];
    total += marg.p[m] * acc;
  }
  return total;
}

double schrodinger_energy(const StateVector& state, const CostMatrix& cost) {
  require_grid(state.grid(), cost.grid);
  return schrodinger_energy(marginals(state), cost);
}

double diagonal_transport_energy(const StateVector& state, const CostMatrix& cost) {
  require_grid(state.grid(), cost.grid);
  const auto marg = marginals(state);
  double total = 0.0;
  for (std::size_t m = 0; m < marg.p.size(); ++m) total += cost(m, m) * marg.p[m];
  return total;
}

// ---------------------------------------------------------------------------

double fgh_prefactor(double length, double mass, double hbar) {
  const double h = 2.0 * std::numbers::pi * hbar;
  return h * h / (4.0 * mass * length * length);
}

double fgh_kernel(int s, int N, double alpha) {
  if (s == 0) return alpha * (static_cast<double>(N) * N - 1.0) / 12.0;
  const double t = std::numbers::pi * s / N;
  const double sign = (s % 2 == 0) ? 1.0 : -1.0;
  const double sn = std::sin(t);
  return alpha * sign * std::cos(t) / (2.0 * sn * sn);
}

FghMatrix fgh_matrix(const PotentialProfile& potential, const CenteredGrid& grid, double mass, double hbar) {
  const std::size_t n = grid.N();
  if (potential.V.size() != n) throw InputError("potential length does not match grid size");
  if (!(mass > 0.0) || !(hbar > 0.0)) throw DomainError("mass and hbar must be positive");
  // Kinetic symbol (ħ²/2m)(j·dk)², so α = ħ²dk²/(2m).
  const double alpha = hbar * hbar * grid.dk() * grid.dk() / (2.0 * mass);
  std::vector<double> kernel(n);
  for (std::size_t s = 0; s < n; ++s) kernel[s] = fgh_kernel(static_cast<int>(s), static_cast<int>(n), alpha);

  FghMatrix out;
  out.grid = grid;
  out.n = n;
  out.variant = FghVariant::odd;
  out.mass = mass;
  out.hbar = hbar;
  out.entries.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t s = i > j ? i - j : j - i;
      out.entries[i * n + j] = kernel[s] + (i == j ? potential.V[i] : 0.0);
    }
  }
  return out;
}

FghMatrix fgh_reference_matrix(std::span<const double> potential, double length, double mass, double hbar) {
  const std::size_t n = potential.size();
  if (n == 0) throw InputError("empty potential");
  if (!(length > 0.0) || !(mass > 0.0) || !(hbar > 0.0)) throw DomainError("length, mass and hbar must be positive");
  const double c = fgh_prefactor(length, mass, hbar);
  const double N = static_cast<double>(n);

  FghMatrix out;
  out.n = n;
  out.variant = FghVariant::reference;
  out.mass = mass;
  out.hbar = hbar;
  out.entries.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v;
      if (i == j) {
        v = c * (N * N + 2.0) / 6.0 + potential[i];
      } else {
        const long s = static_cast<long>(i) - static_cast<long>(j);
        const double sn = std::sin(std::numbers::pi * static_cast<double>(s) / N);
        v = c * ((s % 2 == 0) ? 1.0 : -1.0) / (sn * sn);
      }
      out.entries[i * n + j] = v;
    }
  }
  return out;
}

std::vector<EigenPair> ground_state(std::span<const double> symmetric, const CenteredGrid& grid, int count) {
  const std::size_t n = grid.N();
  if (symmetric.size() != n * n) throw InputError("matrix size does not match grid");
  if (count < 1 || static_cast<std::size_t>(count) > n) throw DomainError("eigenpair count must lie in [1, N]");
  const SymmetricEigen eig = symmetric_eigen(symmetric, n);
  const double inv_root_dx = 1.0 / std::sqrt(grid.dx());

  std::vector<EigenPair> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    const auto v = eig.vector(j);
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[pivot])) pivot = i;
    const double sign = v[pivot] < 0 ? -1.0 : 1.0;
    std::vector<cplx> amps(n);
    for (std::size_t i = 0; i < n; ++i) amps[i] = sign * v[i] * inv_root_dx;
    out.push_back({eig.values[j], StateVector(grid, std::move(amps))});
  }
  return out;
}

std::vector<EigenPair> ground_state(const FghMatrix& matrix, int count) {
  if (!matrix.grid) throw InputError("the reference FGH variant has no grid; diagonalize its entries directly");
  return ground_state(matrix.entries, *matrix.grid, count);
}

// ---------------------------------------------------------------------------

EulerFields euler_fields(const StateVector& state, const CostMatrix& cost) {
  require_grid(state.grid(), cost.grid);
  const auto marg = marginals(state);
  const std::size_t n = cost.grid.N();
  EulerFields out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0};
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      const double h = cost(m, j);
      out.F[m] += h * marg.q[j];
      out.G[j] += h * marg.p[m];
    }
  }
  for (std::size_t m = 0; m < n; ++m) out.E0 += out.F[m] * marg.p[m];
  return out;
}

double euler_residual(const StateVector& state, const CostMatrix& cost) {
  if (state.representation() != Representation::position) {
    throw InputError("euler_residual expects a position-representation state");
  }
  const EulerFields fields = euler_fields(state, cost);
  const CenteredGrid& g = state.grid();
  auto spectrum = ucdft(g, state.amplitudes());
  for (std::size_t j = 0; j < spectrum.size(); ++j) spectrum[j] *= fields.G[j];
  const auto convolution = iucdft(g, spectrum);

  double sum = 0.0;
  for (std::size_t m = 0; m < convolution.size(); ++m) {
    const cplx r = (2.0 * fields.E0 - fields.F[m]) * state[m] - convolution[m];
    sum += std::norm(r);
  }
  return std::sqrt(sum * g.dx());
}

// ---------------------------------------------------------------------------

DivergenceCheck divergence_inequality_check(const StateVector& phi, const ScalarFunction& f,
                                            std::span<const double> field, std::span<const double> divergence) {
  const CenteredGrid& g = phi.grid();
  const std::size_t n = g.N();
  if (phi.representation() != Representation::position) throw InputError("expected a position-space state");
  if (field.size() != n) throw InputError("vector field length does not match grid size");
  if (!divergence.empty() && divergence.size() != n) throw InputError("divergence length does not match grid size");
  if (!f.value) throw InputError("f must be provided");

  double scale = 0.0, imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(phi[i].real()));
    imag = std::max(imag, std::abs(phi[i].imag()));
  }
  if (imag > 1e-12 * std::max(scale, 1.0)) throw InputError("divergence check requires a real-valued state");

  std::vector<double> div(n, 0.0);
  if (!divergence.empty()) {
    std::copy(divergence.begin(), divergence.end(), div.begin());
  } else if (n >= 3) {
    const double dx = g.dx();
    for (std::size_t i = 1; i + 1 < n; ++i) div[i] = (field[i + 1] - field[i - 1]) / (2.0 * dx);
    div[0] = (-3.0 * field[0] + 4.0 * field[1] - field[2]) / (2.0 * dx);
    div[n - 1] = (3.0 * field[n - 1] - 4.0 * field[n - 2] + field[n - 3]) / (2.0 * dx);
  }

  auto fprime = [&](double t) {
    if (f.derivative) return f.derivative(t);
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (f.value(t + h) - f.value(t - h)) / (2.0 * h);
  };

  const auto dphi = spectral_derivative(phi);
  double grad2 = 0.0, weighted = 0.0, source = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = phi[i].real();
    const double fp = fprime(t);
    grad2 += std::norm(dphi[i]);
    weighted += fp * fp * field[i] * field[i];
    source += f.value(t) * div[i];
  }
  const double dx = g.dx();
  const double lhs = grad2 * dx * weighted * dx;
  const double rhs = (source * dx) * (source * dx);
  return {lhs, rhs, lhs - rhs};
}

}  // namespace qot
