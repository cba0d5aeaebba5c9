#include <cmath>

#include "cli/cli.hpp"
#include "qot/bounds.hpp"
#include "qot/random.hpp"
#include "qot/states.hpp"
#include "qot/symplectic.hpp"
#include "qot/transport.hpp"

namespace qot::cli {

namespace {

double abs_diff(double a, double b) { return std::abs(a - b); }

}  // namespace

Report run_verify(const VerifyOptions& options) {
  const CenteredGrid g = options.grid.build();
  const int N = g.N();
  Report r;
  r.command = "verify";
  r.config = Json{{"M", g.M()}, {"N", N}, {"L", g.length()}, {"calibrated", g.is_calibrated()},
                  {"perturb_U", options.perturb_u}};

  // Transform
  const auto shared = UcdftMatrix::shared(N);
  const UcdftMatrix U = options.perturb_u != 0.0 ? shared->perturbed(options.perturb_u) : *shared;
  const double unitarity = U.unitarity_defect();
  r.check("ucdft_unitarity", unitarity, 1e-12, unitarity <= 1e-12);
  const double symmetry = U.symmetry_defect();
  r.check("ucdft_symmetry", symmetry, 1e-12, symmetry <= 1e-12);
  {
    Rng rng(1);
    std::vector<cplx> v(N);
    double before = 0.0;
    for (cplx& c : v) {
      const double re = rng.normal();
      c = cplx(re, rng.normal());
      before += std::norm(c);
    }
    double after = 0.0;
    for (const cplx& c : U.apply(v)) after += std::norm(c);
    const double defect = abs_diff(after, before) / before;
    r.check("parseval", defect, 1e-12, defect <= 1e-12);
  }

  const StateVector psi0 = hermite_state(0, g);
  const auto marg0 = marginals(psi0);

  // Spectrum of k²/2 + x²/2
  if (g.is_calibrated()) {
    PotentialProfile harmonic;
    harmonic.V.resize(N);
    for (int i = 0; i < N; ++i) harmonic.V[i] = 0.5 * g.x_at(i) * g.x_at(i);
    const auto pairs = ground_state(fgh_matrix(harmonic, g, 1.0, 1.0), std::min(5, N));
    double worst = 0.0;
    for (std::size_t j = 0; j < pairs.size(); ++j) worst = std::max(worst, abs_diff(pairs[j].value, j + 0.5));
    r.check("fgh_harmonic_spectrum", worst, 1e-6, worst <= 1e-6);

    const CostMatrix cost = separable_cost(g, harmonic.V, 0.5);
    const double residual = euler_residual(pairs[0].state, cost);
    r.check("euler_residual_fgh", residual, 1e-5, residual <= 1e-5);
  }

  // x²k² energies and duality
  const CostMatrix x2k2 = sample_cost(x2k2_cost(), g);
  {
    const double E = schrodinger_energy(marg0, x2k2);
    r.check("x2k2_schrodinger_energy", abs_diff(E, 0.25), 1e-4, abs_diff(E, 0.25) <= 1e-4);
    const double D = diagonal_transport_energy(psi0, x2k2);
    r.check("x2k2_diagonal_energy", abs_diff(D, 0.75), 1e-3, abs_diff(D, 0.75) <= 1e-3);
    const TransportResult t = kantorovich(marg0, x2k2);
    r.check("x2k2_lp_below_product", t.value - (0.25 - 1e-3), 0.0, t.value <= 0.25 - 1e-3);
    r.check("duality_gap", std::abs(t.gap), 1e-8, std::abs(t.gap) <= 1e-8);
    const double cs = t.slackness_violation(x2k2.entries);
    r.check("complementary_slackness", cs, 1e-7, cs <= 1e-7);
    const double residual = euler_residual(psi0, x2k2);
    r.check("euler_residual_x2k2", residual, 1e-4, residual <= 1e-4);
  }

  // Separable collapse
  {
    const StateVector phi = hermite_state(1, g);
    const CostMatrix cost = separable_cost(g, named_potential("harmonic", g));
    const auto marg = marginals(phi);
    const double diff = abs_diff(kantorovich(marg, cost).value, schrodinger_energy(marg, cost));
    r.check("separable_collapse", diff, 1e-9, diff <= 1e-9);
  }

  // Monge fixed points
  {
    double identity = 0.0, defect = 0.0;
    for (int order = 0; order <= std::min(5, g.M()); ++order) {
      const auto marg = marginals(hermite_state(order, g));
      const MongeMap map = monge_rearrangement(marg);
      identity = std::max(identity, identity_deviation(map, marg));
      defect = std::max(defect, pushforward_defect(map, marg));
    }
    r.check("monge_hermite_identity", identity, 1e-8, identity <= 1e-8);
    r.check("monge_pushforward", defect, 1e-8, defect <= 1e-8);
  }

  // Scaling identity for x²k², which is invariant under (ξ, η) ↦ (ξ/λ, λη)
  {
    double worst = 0.0;
    const double base = schrodinger_energy(marg0, x2k2);
    for (double lam : {0.5, 2.0}) worst = std::max(worst, abs_diff(schrodinger_energy(scale_state(psi0, lam), x2k2), base));
    r.check("scaling_identity", worst, 1e-6, worst <= 1e-6);
  }

  // Divergence inequality equality case
  {
    const ScalarFunction f{[](double t) { return 0.5 * t * t; }, [](double t) { return t; }};
    const std::vector<double> X = g.x_nodes();
    const std::vector<double> div(N, 1.0);
    const DivergenceCheck d = divergence_inequality_check(psi0, f, X, div);
    const double worst = std::max(abs_diff(d.lhs, 0.25), abs_diff(d.rhs, 0.25));
    r.check("divergence_equality_case", worst, 1e-6, worst <= 1e-6);
  }

  // Symplectic subgroup identities and J
  if (g.is_calibrated()) {
    const double diag = verify_subgroup_identity(psi0, BlockMap::diagonal(2.0)).defect;
    r.check("symplectic_diagonal", diag, 1e-4, diag <= 1e-4);
    const double anti = verify_subgroup_identity(psi0, BlockMap::J()).defect;
    r.check("symplectic_antidiagonal", anti, 1e-4, anti <= 1e-4);

    const StateVector phi = hermite_state(2, g);
    const CostMatrix H = sample_cost([](double x, double k) { return x * x + 0.3 * k + x * k * k; }, g);
    const CostMatrix HJ = sample_cost(compose_with_J([](double x, double k) { return x * x + 0.3 * k + x * k * k; }), g);
    const double diff = abs_diff(schrodinger_energy(phi, HJ), schrodinger_energy(fourier_as_position(phi), H));
    r.check("j_energy_identity", diff, 1e-10, diff <= 1e-10);
  }

  r.results["checks_run"] = r.checks.size();
  r.results["checks_failed"] = std::count_if(r.checks.begin(), r.checks.end(), [](const Check& c) { return !c.pass; });
  return r;
}

}  // namespace qot::cli
