// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. An optional argument selects a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "../oracles/kernel_sum.hpp"
#include "qot/bounds.hpp"
#include "qot/costs.hpp"
#include "qot/random.hpp"
#include "qot/states.hpp"
#include "qot/symplectic.hpp"
#include "qot/transport.hpp"

using namespace qot;

namespace {

// Tolerances
constexpr double kUnitarityTol = 1e-12;
constexpr double kHarmonicTol = 1e-6;
constexpr double kKernelTol = 1e-12;
constexpr double kCollapseTol = 1e-9;
constexpr double kEnergyTol = 1e-4;
constexpr double kDiagonalTol = 1e-3;
constexpr double kStrictMargin = 1e-3;
constexpr double kDivergenceTol = 1e-6;
constexpr double kMongeTol = 1e-8;
constexpr double kGapTol = 1e-8;
constexpr double kSlacknessTol = 1e-7;
constexpr double kStrassenTol = 1e-8;
constexpr double kStrassenSeconds = 60.0;
constexpr double kConcentrationSlack = 5e-3;
constexpr double kScalingTol = 1e-6;
constexpr double kSubgroupTol = 1e-4;
constexpr double kJTol = 1e-10;
constexpr double kEulerFghTol = 1e-5;
constexpr double kEulerX2k2Tol = 1e-4;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double s = 0.0;
  for (double& v : w) s += (v = rng.uniform(0.01, 1.0));
  for (double& v : w) v /= s;
  return w;
}

PotentialProfile profile_of(std::vector<double> V, std::string name) { return {std::move(V), 0.0, std::move(name)}; }

// Random smooth potential: a positive quadratic plus a few cosine modes.
std::vector<double> random_smooth_potential(const CenteredGrid& g, Rng& rng) {
  std::vector<double> V(g.N());
  double a[4], w[4];
  for (int j = 0; j < 4; ++j) {
    a[j] = rng.uniform(-1.0, 1.0);
    w[j] = rng.uniform(0.2, 2.0);
  }
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double x = g.x_at(i);
    V[i] = 0.5 * x * x;
    for (int j = 0; j < 4; ++j) V[i] += a[j] * std::cos(w[j] * x);
  }
  return V;
}

// ---------------------------------------------------------------------------

Outcome unitarity() {
  double worst = 0.0;
  for (int N : {3, 129, 257, 1025}) worst = std::max(worst, UcdftMatrix(N).unitarity_defect());
  return {worst <= kUnitarityTol, fmt("max defect %.3g over N in {3,129,257,1025}", worst)};
}

Outcome harmonic_spectrum() {
  const auto g = CenteredGrid::calibrated(64);
  std::vector<double> V;
  for (double x : g.x_nodes()) V.push_back(0.5 * x * x);
  const auto pairs = ground_state(fgh_matrix(profile_of(V, "harmonic"), g, 1.0, 1.0), 5);
  double worst = 0.0;
  for (int j = 0; j < 5; ++j) worst = std::max(worst, std::abs(pairs[j].value - (j + 0.5)));
  return {worst <= kHarmonicTol, fmt("max |E_j - (j+1/2)| = %.3g", worst)};
}

Outcome kernel_closed_form() {
  double worst = 0.0;
  bool diagonal_exact = true;
  for (int N = 3; N <= 33; N += 2) {
    const auto g = CenteredGrid::calibrated((N - 1) / 2);
    const double alpha = g.dk() * g.dk() / (2 * 0.5);
    for (int s = 0; s < N; ++s)
      worst = std::max(worst, std::abs(fgh_kernel(s, N, alpha) - oracle::kernel_direct_sum(s, N, alpha)));
    const FghMatrix H = fgh_matrix(profile_of(std::vector<double>(N, 0.0), "zero"), g);
    const double expected = alpha * (static_cast<double>(N) * N - 1.0) / 12.0;
    for (int i = 0; i < N; ++i) diagonal_exact = diagonal_exact && H(i, i) == expected;
  }
  return {worst <= kKernelTol && diagonal_exact,
          fmt("max |closed form - direct sum| = %.3g, diagonal exact: ", worst) + (diagonal_exact ? "yes" : "no")};
}

Outcome separable_collapse() {
  const auto g = CenteredGrid::make(64, 16.0);
  Rng rng(404);
  std::vector<std::vector<double>> potentials;
  potentials.push_back({});
  potentials.push_back({});
  for (double x : g.x_nodes()) {
    potentials[0].push_back(x * x);
    potentials[1].push_back(std::cosh(x) * (std::cosh(x) - 1.0));
  }
  potentials.push_back(random_smooth_potential(g, rng));
  double worst = 0.0;
  for (const auto& V : potentials) {
    const CostMatrix H = separable_cost(g, V);
    std::vector<StateVector> states{hermite_state(0, g), hermite_state(3, g)};
    for (int t = 0; t < 3; ++t) states.push_back(random_state(g, rng));
    for (const StateVector& phi : states) {
      const auto m = marginals(phi);
      worst = std::max(worst, std::abs(kantorovich(m, H).value - schrodinger_energy(m, H)));
    }
  }
  return {worst <= kCollapseTol, fmt("max |K_H - E_H| = %.3g over 3 potentials x 5 states", worst)};
}

Outcome x2k2_numbers() {
  const auto g = CenteredGrid::calibrated(64);
  const StateVector psi0 = hermite_state(0, g);
  const CostMatrix H = sample_cost(x2k2_cost(), g);
  const double E = schrodinger_energy(psi0, H);
  const double D = diagonal_transport_energy(psi0, H);
  const double K = kantorovich(marginals(psi0), H).value;
  const bool pass = std::abs(E - 0.25) <= kEnergyTol && std::abs(D - 0.75) <= kDiagonalTol && K <= 0.25 - kStrictMargin;
  return {pass, fmt("E_H = %.10f, diagonal = %.10f, ", E, D) + fmt("LP = %.10f", K)};
}

Outcome divergence_equality() {
  const auto g = CenteredGrid::calibrated(64);
  const StateVector psi0 = hermite_state(0, g);
  const ScalarFunction f{[](double t) { return 0.5 * t * t; }, [](double t) { return t; }};
  const DivergenceCheck d = divergence_inequality_check(psi0, f, g.x_nodes(), std::vector<double>(g.N(), 1.0));
  // λ₀ = n²/4 with n = 1 is attained: E_{x²k²}(ψ₀) = 1/4.
  const double E = schrodinger_energy(psi0, sample_cost(x2k2_cost(), g));
  const double worst = std::max({std::abs(d.lhs - 0.25), std::abs(d.rhs - 0.25), std::abs(E - 0.25)});
  return {worst <= kDivergenceTol, fmt("lhs = %.12f, rhs = %.12f", d.lhs, d.rhs) + fmt(", E = %.12f", E)};
}

Outcome monge() {
  const auto g = CenteredGrid::calibrated(64);
  Rng rng(77);
  double defect = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto m = marginals(random_state(g, rng, 1 + static_cast<int>(rng.below(12))));
    defect = std::max(defect, pushforward_defect(monge_rearrangement(m), m));
  }
  double identity = 0.0;
  for (int order = 0; order <= 5; ++order) {
    const auto m = marginals(hermite_state(order, g));
    identity = std::max(identity, identity_deviation(monge_rearrangement(m), m));
  }
  return {defect <= kMongeTol && identity <= kMongeTol,
          fmt("max pushforward defect %.3g, max |T - id| on Hermite 0..5 %.3g", defect, identity)};
}

Outcome duality() {
  Rng rng(2024);
  const std::size_t n = 65;
  const auto g = CenteredGrid::calibrated(32);
  double gap = 0.0, slack = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto p = random_simplex(rng, n), q = random_simplex(rng, n);
    std::vector<double> cost(n * n);
    switch (t % 3) {
      case 0:
        for (double& c : cost) c = rng.uniform(0.0, 10.0);
        break;
      case 1: {
        const double a = rng.uniform(0.5, 2.0), b = rng.uniform(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const double x = g.x_at(i), k = g.k_at(j);
            cost[i * n + j] = a * x * x * k * k + b * x * k;
          }
        break;
      }
      default:
        for (double& c : cost) c = std::floor(rng.uniform(0.0, 4.0));
    }
    const TransportResult r = solve_transport(p, q, cost);
    gap = std::max(gap, std::abs(r.gap));
    slack = std::max(slack, r.slackness_violation(cost));
  }
  return {gap <= kGapTol && slack <= kSlacknessTol, fmt("max gap %.3g, max slackness violation %.3g", gap, slack)};
}

Outcome strassen() {
  Rng rng(9);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4 + t % 3;
    const auto p = random_simplex(rng, n), q = random_simplex(rng, n);
    std::vector<unsigned char> mask(n * n);
    const double density = rng.uniform(0.2, 0.8);
    for (auto& b : mask) b = rng.uniform() < density;
    const StrassenResult s = strassen_bruteforce(p, q, mask);
    worst = std::max(worst, std::abs(s.lp_value - s.sup_value));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= kStrassenTol && seconds < kStrassenSeconds,
          fmt("max |LP - sup| = %.3g in %.2f s", worst, seconds)};
}

Outcome concentration() {
  const auto g = CenteredGrid::calibrated(96);
  const double disk = eprob_estimate(PhaseRegion::disk(g, 2.0), 8, 1).best_value;
  const double square = eprob_estimate(PhaseRegion::square(g, 1.0), 8, 1).best_value;
  const double disk_floor = 1 - std::exp(-4.0) - kConcentrationSlack;
  const double square_floor = std::erf(1.0) * std::erf(1.0) - kConcentrationSlack;
  return {disk >= disk_floor && square >= square_floor,
          fmt("disk %.6f (floor %.6f), ", disk, disk_floor) + fmt("square %.6f (floor %.6f)", square, square_floor)};
}

Outcome inequality_gates() {
  const auto g = CenteredGrid::calibrated(64);
  Rng rng(31337);
  auto random_set = [&]() {
    std::vector<IntervalSet::Interval> parts;
    const int pieces = 1 + static_cast<int>(rng.below(2));
    for (int k = 0; k < pieces; ++k) {
      const double c = rng.uniform(-1.5, 1.5), w = rng.uniform(0.05, 3.0);
      parts.push_back({c - w, c + w});
    }
    return IntervalSet(parts);
  };
  int steiner_applicable = 0, steiner_fail = 0, malinnikova_fail = 0;
  for (int t = 0; t < 200; ++t) {
    const StateVector phi = scale_state_interpolated(random_state(g, rng, 1 + static_cast<int>(rng.below(6))),
                                                     rng.uniform(0.6, 1.6));
    const SteinerResult s = steiner_bound(phi, random_set(), random_set());
    if (s.applicable) {
      ++steiner_applicable;
      if (!s.holds) ++steiner_fail;
    }

    // Orthonormal family: Gram–Schmidt on random Hermite combinations
    const int count = 1 + static_cast<int>(rng.below(8));
    std::vector<StateVector> family;
    for (int j = 0; j < count; ++j) {
      const StateVector mix = random_state(g, rng, count + 2);
      std::vector<cplx> v(mix.amplitudes().begin(), mix.amplitudes().end());
      for (const StateVector& e : family) {
        cplx dot{};
        for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(e[i]) * v[i] * g.dx();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * e[i];
      }
      family.push_back(StateVector(g, std::move(v)).normalized());
    }
    if (!malinnikova_check(family, random_set(), random_set()).holds) ++malinnikova_fail;
  }
  return {steiner_fail == 0 && malinnikova_fail == 0,
          "Steiner failures " + std::to_string(steiner_fail) + "/" + std::to_string(steiner_applicable) +
              " applicable, localization failures " + std::to_string(malinnikova_fail) + "/200"};
}

Outcome scaling() {
  const auto g = CenteredGrid::calibrated(64);
  const CostMatrix H = sample_cost(x2k2_cost(), g);
  double worst = 0.0;
  for (int order : {0, 2}) {
    const StateVector phi = hermite_state(order, g);
    for (double lam : {0.5, 2.0}) {
      const double lhs = schrodinger_energy(scale_state(phi, lam), H);
      const CostMatrix moved = sample_cost(
          [lam](double x, double k) {
            const double a = x / lam, b = lam * k;
            return a * a * b * b;
          },
          g);
      worst = std::max(worst, std::abs(lhs - schrodinger_energy(phi, moved)));
    }
  }
  return {worst <= kScalingTol, fmt("max deviation %.3g", worst)};
}

Outcome symplectic() {
  const auto g = CenteredGrid::calibrated(64);
  const StateVector psi0 = hermite_state(0, g);
  double subgroup = 0.0;
  for (double a : {2.0, 0.5}) subgroup = std::max(subgroup, verify_subgroup_identity(psi0, BlockMap::diagonal(a)).defect);
  for (double b : {1.0, 2.0})
    subgroup = std::max(subgroup, verify_subgroup_identity(psi0, BlockMap::antidiagonal(b)).defect);

  const std::vector<CostFunction> costs{
      x2k2_cost(),
      [](double x, double k) { return x * x + k * k; },
      [](double x, double k) { return std::cos(x) * k + 0.1 * x; },
      [](double x, double k) { return std::exp(-(x - 1) * (x - 1) - k * k); },
      [](double x, double k) { return x * k * k * k + std::abs(x - k); },
  };
  Rng rng(8);
  double j_defect = 0.0;
  for (int t = 0; t < 20; ++t) {
    const StateVector phi = random_state(g, rng);
    const StateVector hat = fourier_as_position(phi);
    for (const auto& h : costs) {
      const double lhs = schrodinger_energy(phi, sample_cost(compose_with_J(h), g));
      const double rhs = schrodinger_energy(hat, sample_cost(h, g));
      j_defect = std::max(j_defect, std::abs(lhs - rhs));
    }
  }
  return {subgroup <= kSubgroupTol && j_defect <= kJTol,
          fmt("max subgroup defect %.3g, max J energy defect %.3g", subgroup, j_defect)};
}

Outcome euler() {
  double fgh = 0.0;
  {
    const auto g = CenteredGrid::calibrated(64);
    for (int which = 0; which < 2; ++which) {
      std::vector<double> V;
      for (double x : g.x_nodes()) V.push_back(which == 0 ? x * x : x * x * x * x);
      const auto ground = ground_state(fgh_matrix(profile_of(V, "separable"), g), 1);
      fgh = std::max(fgh, euler_residual(ground[0].state, separable_cost(g, V)));
    }
  }
  {
    const auto g = CenteredGrid::make(96, 16.0);
    std::vector<double> p;
    for (double x : g.x_nodes()) p.push_back(std::sinh(x));
    const auto field = from_p_field(p, 1.0, g);
    const auto ground = ground_state(fgh_matrix(field.potential, g), 1);
    fgh = std::max(fgh, euler_residual(ground[0].state, separable_cost(g, field.potential.V)));
  }
  const auto g = CenteredGrid::calibrated(64);
  const double x2k2 = euler_residual(hermite_state(0, g), sample_cost(x2k2_cost(), g));
  return {fgh <= kEulerFghTol && x2k2 <= kEulerX2k2Tol,
          fmt("FGH ground states %.3g, (psi0, x^2k^2) %.3g", fgh, x2k2)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"UCDFT unitarity", unitarity},
      {"FGH harmonic oscillator spectrum", harmonic_spectrum},
      {"FGH kernel closed form vs direct sum", kernel_closed_form},
      {"separable-cost collapse K_H = E_H", separable_collapse},
      {"x^2k^2 energies for psi0 and strict LP improvement", x2k2_numbers},
      {"divergence inequality equality case", divergence_equality},
      {"Monge rearrangement", monge},
      {"strong duality and complementary slackness", duality},
      {"LP value equals subset supremum", strassen},
      {"phase-space concentration estimates", concentration},
      {"Steiner and localization sanity gates", inequality_gates},
      {"scaling identity", scaling},
      {"symplectic identities", symplectic},
      {"Euler residuals", euler},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
