#include "qot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "qot/errors.hpp"
#include "qot/random.hpp"
#include "qot/states.hpp"

namespace qot {

double eta(const IntervalSet& A, const IntervalSet& B, const BoundParams& params) {
  if (params.dimension < 1) throw InputError("dimension must be a positive integer");
  const double a = A.total_length(), b = B.total_length();
  if (params.dimension == 1) return a * b;
  if (!params.widths) throw InputError("dimension > 1 needs the average widths w(A), w(B)");
  const double inv_d = 1.0 / params.dimension;
  const auto [wa, wb] = *params.widths;
  return std::min({a * b, std::pow(a, inv_d) * wb, wa * std::pow(b, inv_d)});
}

double position_mass(const StateVector& state, const IntervalSet& A) {
  const auto marg = marginals(state);
  double total = 0.0;
  for (std::size_t m = 0; m < marg.p.size(); ++m)
    if (A.contains(marg.grid.x_at(m))) total += marg.p[m];
  return total;
}

double momentum_mass(const StateVector& state, const IntervalSet& B) {
  const auto marg = marginals(state);
  double total = 0.0;
  for (std::size_t n = 0; n < marg.q.size(); ++n)
    if (B.contains(marg.grid.k_at(n))) total += marg.q[n];
  return total;
}

double discrete_measure(const IntervalSet& A, const CenteredGrid& grid, Representation rep) {
  const bool pos = rep == Representation::position;
  std::size_t count = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(grid.N()); ++i)
    if (A.contains(pos ? grid.x_at(i) : grid.k_at(i))) ++count;
  return static_cast<double>(count) * (pos ? grid.dx() : grid.dk());
}

double nazarov_lhs(const StateVector& state, const IntervalSet& A, const IntervalSet& B) {
  return 2.0 - position_mass(state, A) - momentum_mass(state, B);
}

SteinerResult steiner_bound(const StateVector& state, const IntervalSet& A, const IntervalSet& B) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  SteinerResult out;
  out.alpha = std::clamp(position_mass(state, A), 0.0, 1.0);
  out.beta = std::clamp(momentum_mass(state, B), 0.0, 1.0);
  out.applicable = out.alpha + out.beta > 1.0;
  const CenteredGrid& g = state.grid();
  out.measure_product =
      discrete_measure(A, g, Representation::position) * discrete_measure(B, g, Representation::momentum);
  out.continuous_product = A.total_length() * B.total_length();
  if (!out.applicable) return out;
  const double d1 = std::sqrt(out.beta) - std::sqrt(1.0 - out.alpha);
  const double d2 = std::sqrt(out.alpha) - std::sqrt(1.0 - out.beta);
  out.c1 = two_pi / out.alpha * d1 * d1;
  out.c2 = two_pi / out.beta * d2 * d2;
  out.holds = out.measure_product >= std::max(out.c1, out.c2) - 1e-9;
  return out;
}

MalinnikovaResult malinnikova_check(const std::vector<StateVector>& states, const IntervalSet& A,
                                    const IntervalSet& B) {
  MalinnikovaResult out;
  const double count = static_cast<double>(states.size());
  if (states.empty()) {
    out.lhs = 0.0;
    return out;
  }
  const CenteredGrid& g = states.front().grid();
  for (const StateVector& s : states) {
    if (!(s.grid() == g)) throw InputError("states live on different grids");
    if (s.representation() != Representation::position) throw InputError("expected position-space states");
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i; j < states.size(); ++j) {
      cplx dot{};
      for (std::size_t m = 0; m < states[i].size(); ++m) dot += std::conj(states[i][m]) * states[j][m];
      dot *= g.dx();
      out.gram_defect = std::max(out.gram_defect, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  if (out.gram_defect > 1e-6) {
    throw InputError("states are not orthonormal on the grid (Gram defect " + std::to_string(out.gram_defect) + ")");
  }
  double tail = 0.0;
  for (const StateVector& s : states) {
    tail += std::sqrt(std::max(0.0, 1.0 - position_mass(s, A)));
    tail += std::sqrt(std::max(0.0, 1.0 - momentum_mass(s, B)));
  }
  out.lhs = count - discrete_measure(A, g, Representation::position) * discrete_measure(B, g, Representation::momentum);
  out.continuous_lhs = count - A.total_length() * B.total_length();
  out.rhs = 1.5 * tail;
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

MomentSum moment_sum(const std::vector<StateVector>& states, double power) {
  if (!(power > 0.0)) throw DomainError("moment power must be positive");
  MomentSum out;
  for (const StateVector& s : states) {
    const auto marg = marginals(s);
    for (std::size_t m = 0; m < marg.p.size(); ++m) out.value += std::pow(std::abs(marg.grid.x_at(m)), power) * marg.p[m];
    for (std::size_t n = 0; n < marg.q.size(); ++n) out.value += std::pow(std::abs(marg.grid.k_at(n)), power) * marg.q[n];
  }
  if (!states.empty()) out.constant = out.value / std::pow(static_cast<double>(states.size()), 1.0 + power / 2.0);
  return out;
}

// ---------------------------------------------------------------------------

double region_mass(const StateVector& state, const PhaseRegion& region) {
  if (!(state.grid() == region.grid)) throw InputError("state and region live on different grids");
  const auto marg = marginals(state);
  const std::size_t n = marg.p.size();
  double total = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (region.mask[m * n + j]) row += marg.q[j];
    total += marg.p[m] * row;
  }
  return total;
}

int thread_budget() {
  if (const char* env = std::getenv("QOT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct RestartOutcome {
  double best = -1.0;
  std::vector<cplx> best_x;
  std::vector<EprobStep> trace;
};

double objective(std::span<const unsigned char> mask, std::span<const double> p, std::span<const double> q,
                 std::vector<double>& r, std::vector<double>& s) {
  const std::size_t n = p.size();
  std::fill(r.begin(), r.end(), 0.0);
  std::fill(s.begin(), s.end(), 0.0);
  double total = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const unsigned char* row = &mask[m * n];
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j]) continue;
      r[m] += q[j];
      s[j] += p[m];
    }
    total += p[m] * r[m];
  }
  return total;
}

RestartOutcome run_restart(const PhaseRegion& region, const UcdftMatrix& U, std::vector<cplx> x, int restart,
                           const EprobOptions& options) {
  const std::size_t n = x.size();
  std::vector<double> p(n), q(n), r(n), s(n);
  RestartOutcome out;
  double previous = 0.0;
  auto normalize = [](std::vector<cplx>& v) {
    double norm = 0.0;
    for (const cplx& c : v) norm += std::norm(c);
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) return false;
    for (cplx& c : v) c /= norm;
    return true;
  };
  normalize(x);
  for (int it = 0; it <= options.max_iterations; ++it) {
    std::vector<cplx> ux = U.apply(x);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = std::norm(x[i]);
      q[i] = std::norm(ux[i]);
    }
    const double value = objective(region.mask, p, q, r, s);
    out.trace.push_back({restart, it, value, it > 0 && value < previous});
    if (value > out.best) {
      out.best = value;
      out.best_x = x;
    }
    if (it > 0 && std::abs(value - previous) <= options.tolerance) break;
    previous = value;
    if (it == options.max_iterations) break;

    for (std::size_t i = 0; i < n; ++i) ux[i] *= s[i];
    std::vector<cplx> next = U.apply_adjoint(ux);
    for (std::size_t i = 0; i < n; ++i) next[i] += r[i] * x[i];
    if (!normalize(next)) break;  // Λ missed the state entirely
    x = std::move(next);
  }
  return out;
}

}  // namespace

EprobResult eprob_estimate(const PhaseRegion& region, int restarts, std::uint64_t seed, const EprobOptions& options) {
  if (restarts < 1) throw DomainError("restarts must be at least 1");
  const CenteredGrid& g = region.grid;
  const std::size_t n = g.N();
  if (region.mask.size() != n * n) throw InputError("region mask does not match its grid");

  // Starting points are drawn up front so results do not depend on scheduling.
  std::vector<std::vector<cplx>> starts;
  starts.reserve(restarts);
  {
    const StateVector h0 = hermite_state(0, g);
    std::vector<cplx> x(n);
    const double root = std::sqrt(g.dx());
    for (std::size_t i = 0; i < n; ++i) x[i] = h0[i] * root;
    starts.push_back(std::move(x));
  }
  Rng rng(seed);
  for (int k = 1; k < restarts; ++k) {
    std::vector<cplx> x(n);
    for (cplx& c : x) {
      const double re = rng.normal();
      c = cplx(re, rng.normal());
    }
    starts.push_back(std::move(x));
  }

  const auto U = UcdftMatrix::shared(static_cast<int>(n));
  std::vector<RestartOutcome> outcomes(restarts);
  const int workers = std::min(restarts, options.threads > 0 ? options.threads : thread_budget());
  if (workers <= 1) {
    for (int k = 0; k < restarts; ++k) outcomes[k] = run_restart(region, *U, starts[k], k, options);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int k = w; k < restarts; k += workers) outcomes[k] = run_restart(region, *U, starts[k], k, options);
      });
    }
    for (auto& t : pool) t.join();
  }

  int best = 0;
  for (int k = 1; k < restarts; ++k)
    if (outcomes[k].best > outcomes[best].best) best = k;

  std::vector<cplx> amps = outcomes[best].best_x;
  const double inv_root = 1.0 / std::sqrt(g.dx());
  for (cplx& c : amps) c *= inv_root;
  EprobResult result{outcomes[best].best, StateVector(g, std::move(amps)), best, {}};
  for (auto& o : outcomes) result.trace.insert(result.trace.end(), o.trace.begin(), o.trace.end());
  return result;
}

double eprob_upper(const PhaseRegion& region, const BoundParams& params) {
  const CenteredGrid& g = region.grid;
  const std::size_t n = g.N();
  std::vector<unsigned char> rows(n, 0), cols(n, 0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t j = 0; j < n; ++j)
      if (region.mask[m * n + j]) rows[m] = cols[j] = 1;
  const double a = static_cast<double>(std::count(rows.begin(), rows.end(), 1)) * g.dx();
  const double b = static_cast<double>(std::count(cols.begin(), cols.end(), 1)) * g.dk();
  const IntervalSet A({{0.0, a}}), B({{0.0, b}});
  const double e = eta(A, B, params);
  const double inner = std::max(0.0, 1.0 - 0.5 * params.alpha * std::exp(-params.beta * e));
  return inner * inner;
}

// ---------------------------------------------------------------------------

double max_chernoff_rho(double sigma) {
  if (!(sigma > 1.0)) throw DomainError("sigma must exceed 1");
  return std::sqrt(2.0 * std::numbers::e / std::numbers::pi) * std::sqrt(sigma - 1.0) / sigma;
}

ChernoffResult erfc_chernoff(double R, double rho, double sigma, double kappa, double lam) {
  if (!std::isfinite(R) || R < 0.0) throw DomainError("R must be a nonnegative finite number");
  ChernoffResult out;
  out.erfc_value = std::erfc(R);
  out.lower_value = rho * std::exp(-sigma * R * R);
  out.upper_value = kappa * std::exp(-lam * R * R);
  // Small relative slack so that ρ = max_chernoff_rho(σ) passes its own test.
  out.lower_params_valid = sigma > 1.0 && rho > 0.0 && rho <= max_chernoff_rho(sigma) * (1.0 + 1e-15);
  out.upper_params_valid = kappa >= 1.0 && lam > 0.0 && lam <= 1.0;
  out.lower_ok = out.lower_params_valid && out.erfc_value >= out.lower_value;
  out.upper_ok = out.upper_params_valid && out.erfc_value <= out.upper_value;
  return out;
}

}  // namespace qot
