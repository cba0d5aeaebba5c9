#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "cli/cli.hpp"
#include "qot/bounds.hpp"
#include "qot/errors.hpp"
#include "qot/io.hpp"
#include "qot/random.hpp"
#include "qot/states.hpp"
#include "qot/transport.hpp"

namespace qot::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InputError("cannot read " + what + " from '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_number(s, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InputError(what + " must be an integer, got '" + s + "'");
  return static_cast<int>(v);
}

// "kind:rest" → (kind, rest)
std::pair<std::string, std::string> head_tail(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

std::string csv_cell(const Json& v) {
  if (v.is_number()) return io::format_number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  std::string text = v.is_string() ? v.get<std::string>() : v.dump();
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

Json grid_json(const CenteredGrid& g) {
  return Json{{"M", g.M()}, {"N", g.N()}, {"L", g.length()}, {"dx", g.dx()}, {"dk", g.dk()},
              {"calibrated", g.is_calibrated()}};
}

Json vector_json(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

// ---------------------------------------------------------------------------

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string Report::to_json() const {
  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = command;
  doc["config"] = config;
  doc["results"] = results;
  doc["checks"] = Json::array();
  for (const Check& c : checks) {
    doc["checks"].push_back(Json{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}});
  }
  return doc.dump(2) + "\n";
}

std::string Report::to_csv() const {
  std::string out;
  if (table_header) {
    for (std::size_t i = 0; i < table_header->size(); ++i) out += (i ? "," : "") + (*table_header)[i];
    out += "\n";
    for (const auto& row : table_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + io::format_number(row[i]);
      out += "\n";
    }
    return out;
  }
  out = "name,value\n";
  for (const auto& [key, value] : results.items()) out += key + "," + csv_cell(value) + "\n";
  for (const Check& c : checks) {
    out += "check:" + c.name + "," + (c.pass ? "pass" : "fail") + "\n";
    out += "check:" + c.name + ":value," + io::format_number(c.value) + "\n";
    out += "check:" + c.name + ":tolerance," + io::format_number(c.tolerance) + "\n";
  }
  return out;
}

CenteredGrid GridOptions::build() const {
  return length ? CenteredGrid::make(M, *length) : CenteredGrid::calibrated(M);
}

// ---------------------------------------------------------------------------

std::vector<double> named_potential(const std::string& name, const CenteredGrid& grid) {
  std::vector<double> V(grid.N());
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double x = grid.x_at(i);
    if (name == "harmonic") {
      V[i] = 0.5 * x * x;
    } else if (name == "cosh") {
      V[i] = std::cosh(x) * (std::cosh(x) - 1.0);
    } else if (name == "quartic") {
      V[i] = x * x * x * x;
    } else if (name == "zero") {
      V[i] = 0.0;
    } else {
      throw InputError("unknown potential '" + name + "' (harmonic, cosh, quartic, zero)");
    }
  }
  return V;
}

std::vector<double> named_p_field(const std::string& name, const CenteredGrid& grid) {
  std::vector<double> p(grid.N());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = grid.x_at(i);
    if (name == "sinh") {
      p[i] = std::sinh(x);
    } else if (name == "tanh") {
      p[i] = std::tanh(x);
    } else if (name == "linear") {
      p[i] = x;
    } else {
      throw InputError("unknown p-field '" + name + "' (sinh, tanh, linear)");
    }
  }
  return p;
}

StateVector parse_state(const std::string& spec, const CenteredGrid& grid) {
  const auto [kind, rest] = head_tail(spec);
  if (kind == "hermite") return hermite_state(rest.empty() ? 0 : to_int(rest, "Hermite order"), grid);
  if (kind == "gaussian") return hermite_state(0, grid);
  if (kind == "pfield") {
    const auto parts = split(rest, ':');
    if (parts.empty() || parts[0].empty()) throw InputError("pfield state needs a field name, e.g. pfield:sinh");
    const double lambda = parts.size() > 1 ? to_number(parts[1], "lambda") : 1.0;
    return from_p_field(named_p_field(parts[0], grid), lambda, grid).state;
  }
  if (kind == "file") return io::load_state_csv(rest, grid).normalized();
  throw InputError("unknown state spec '" + spec + "' (hermite:<n>, pfield:<name>, file:<path>)");
}

PhaseRegion parse_region(const std::string& spec, const CenteredGrid& grid) {
  const auto [kind, rest] = head_tail(spec);
  if (kind == "disk") return PhaseRegion::disk(grid, to_number(rest, "disk radius"));
  if (kind == "square") return PhaseRegion::square(grid, to_number(rest, "square half-width"));
  if (kind == "full") return PhaseRegion::full(grid);
  if (kind == "none") return PhaseRegion::none(grid);
  if (kind == "file") return io::load_mask_csv(rest, grid);
  if (kind == "box" || kind == "cobox") {
    const auto parts = split(rest, ',');
    if (parts.size() != 2) throw InputError(kind + " needs two half-widths, e.g. " + kind + ":1,2");
    const double a = to_number(parts[0], "half-width"), b = to_number(parts[1], "half-width");
    if (kind == "cobox") return PhaseRegion::complement_of_box(grid, a, b);
    auto region = PhaseRegion::product(grid, IntervalSet::symmetric(a), IntervalSet::symmetric(b));
    region.description = spec;
    return region;
  }
  throw InputError("unknown region spec '" + spec + "' (disk:R, square:R, box:a,b, cobox:a,b, full, none, file:<path>)");
}

CostMatrix parse_cost(const std::string& spec, const CenteredGrid& grid) {
  const auto [kind, rest] = head_tail(spec);
  if (kind == "x2k2") return sample_cost(x2k2_cost(), grid);
  if (kind == "separable") {
    const auto parts = split(rest, ':');
    if (parts.empty() || parts[0].empty()) throw InputError("separable cost needs a potential, e.g. separable:harmonic");
    const double kinetic = parts.size() > 1 ? to_number(parts[1], "kinetic coefficient") : 1.0;
    return separable_cost(grid, named_potential(parts[0], grid), kinetic);
  }
  if (kind == "indicator") return indicator_cost(parse_region(rest, grid));
  if (kind == "file") return io::load_cost_csv(rest, grid);
  throw InputError("unknown cost spec '" + spec + "' (x2k2, separable:<V>[:c], indicator:<region>, file:<path>)");
}

IntervalSet parse_intervals(const std::string& spec) {
  if (spec == "all") return IntervalSet::whole_line();
  if (spec == "empty" || spec.empty()) return IntervalSet();
  std::vector<IntervalSet::Interval> out;
  for (const auto& piece : split(spec, ';')) {
    const auto ends = split(piece, ',');
    if (ends.size() != 2) throw InputError("interval '" + piece + "' is not of the form lo,hi");
    out.push_back({to_number(ends[0], "interval end"), to_number(ends[1], "interval end")});
  }
  return IntervalSet(std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

struct Common {
  GridOptions grid;
  double length = 0.0;
  bool calibrated = false;
  std::string format = "csv";
  bool json = false;
  std::string output;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--M", grid.M, "half-size of the grid, N = 2M+1")->check(CLI::NonNegativeNumber);
    auto* L = app->add_option("--L", length, "domain length (calibrated grid when omitted)");
    auto* cal = app->add_flag("--calibrated", calibrated, "use L = sqrt(2 pi N)");
    L->excludes(cal);
    app->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_flag("--json", json, "shorthand for --format json");
    app->add_option("--output,-o", output, "output file (stdout when omitted)");
    app->add_option("--seed", seed, "64-bit seed for every random draw");
  }

  CenteredGrid build(CLI::App* app) {
    if (app->count("--L")) grid.length = length;
    return grid.build();
  }
};

std::string require(const std::string& value, const std::string& option) {
  if (value.empty()) throw InputError("missing required option " + option);
  return value;
}

Report cmd_eig(CLI::App* app, Common& c, const std::string& potential, const std::string& p_field, double lambda,
               int count, std::optional<double> mass_opt, double hbar, const std::string& vectors_out) {
  if (potential.empty() == p_field.empty()) throw InputError("eig needs exactly one of --potential or --p-field");
  const CenteredGrid g = c.build(app);
  Report r;
  r.command = "eig";
  PotentialProfile profile;
  double mass;
  if (!potential.empty()) {
    profile.V = named_potential(potential, g);
    profile.description = potential;
    mass = mass_opt.value_or(1.0);
  } else {
    profile = from_p_field(named_p_field(p_field, g), lambda, g).potential;
    profile.description = "p-field " + p_field;
    mass = mass_opt.value_or(0.5);
  }
  r.config = Json{{"grid", grid_json(g)}, {"potential", profile.description}, {"count", count},
                  {"mass", mass}, {"hbar", hbar}};
  if (!p_field.empty()) r.config["lambda"] = lambda;

  const auto pairs = ground_state(fgh_matrix(profile, g, mass, hbar), count);
  std::vector<double> values;
  r.table_header = std::vector<std::string>{"index", "value"};
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    values.push_back(pairs[j].value);
    r.table_rows.push_back({static_cast<double>(j), pairs[j].value});
  }
  r.results["eigenvalues"] = values;

  if (!vectors_out.empty()) {
    std::string text = "x";
    for (std::size_t j = 0; j < pairs.size(); ++j) text += ",phi_" + std::to_string(j);
    text += "\n";
    for (int i = 0; i < g.N(); ++i) {
      text += io::format_number(g.x_at(i));
      for (const auto& p : pairs) text += "," + io::format_number(p.state[i].real());
      text += "\n";
    }
    io::write_atomic(vectors_out, text);
    r.results["vectors_file"] = vectors_out;
  }
  return r;
}

Report cmd_energy(CLI::App* app, Common& c, const std::string& state_spec, const std::string& cost_spec) {
  const CenteredGrid g = c.build(app);
  const StateVector phi = parse_state(require(state_spec, "--state"), g);
  const CostMatrix cost = parse_cost(require(cost_spec, "--cost"), g);
  Report r;
  r.command = "energy";
  r.config = Json{{"grid", grid_json(g)}, {"state", state_spec}, {"cost", cost_spec}};
  r.results["schrodinger_energy"] = schrodinger_energy(phi, cost);
  r.results["diagonal_transport_energy"] = diagonal_transport_energy(phi, cost);
  r.results["euler_residual"] = euler_residual(phi, cost);
  r.results["norm"] = std::sqrt(phi.norm_squared());
  return r;
}

struct TransportArgs {
  std::string state;
  std::string cost;
  std::string region;
  std::string coupling_out;
  std::string duals_out;
  std::string map_out;
  int size = 6;
  double threshold = 1e-12;
};

Report cmd_kantorovich(CLI::App* app, Common& c, const TransportArgs& a) {
  const CenteredGrid g = c.build(app);
  const StateVector phi = parse_state(require(a.state, "--state"), g);
  const CostMatrix cost = parse_cost(require(a.cost, "--cost"), g);
  const auto marg = marginals(phi);
  const TransportResult t = kantorovich(marg, cost);
  Report r;
  r.command = "transport kantorovich";
  r.config = Json{{"grid", grid_json(g)}, {"state", a.state}, {"cost", a.cost}};
  r.results["value"] = t.value;
  r.results["dual_value"] = t.dual_value;
  r.results["gap"] = t.gap;
  r.results["schrodinger_energy"] = schrodinger_energy(marg, cost);
  r.results["support_size"] = t.coupling.support_size(a.threshold);
  r.results["iterations"] = t.iterations;
  r.results["marginal_defect"] = t.coupling.marginal_defect();
  r.results["dual_x"] = vector_json(t.dual_x);
  r.results["dual_k"] = vector_json(t.dual_k);
  r.check("duality_gap", std::abs(t.gap), 1e-8, std::abs(t.gap) <= 1e-8);
  const double cs = t.slackness_violation(cost.entries);
  r.check("complementary_slackness", cs, 1e-7, cs <= 1e-7);
  const double inf = std::max(0.0, t.dual_infeasibility(cost.entries));
  r.check("dual_feasibility", inf, 1e-7, inf <= 1e-7);
  if (!a.coupling_out.empty()) io::write_atomic(a.coupling_out, io::coupling_csv(t.coupling, -g.M(), -g.M(), a.threshold));
  if (!a.duals_out.empty()) {
    std::string text = "node,x,dual_x,k,dual_k\n";
    for (int i = 0; i < g.N(); ++i) {
      text += std::to_string(g.node(i)) + "," + io::format_number(g.x_at(i)) + "," + io::format_number(t.dual_x[i]) +
              "," + io::format_number(g.k_at(i)) + "," + io::format_number(t.dual_k[i]) + "\n";
    }
    io::write_atomic(a.duals_out, text);
  }
  return r;
}

Report cmd_monge(CLI::App* app, Common& c, const TransportArgs& a) {
  const CenteredGrid g = c.build(app);
  const StateVector phi = parse_state(require(a.state, "--state"), g);
  const auto marg = marginals(phi);
  const MongeMap map = monge_rearrangement(marg);
  Report r;
  r.command = "transport monge";
  r.config = Json{{"grid", grid_json(g)}, {"state", a.state}};
  const double defect = pushforward_defect(map, marg);
  r.results["pushforward_defect"] = defect;
  r.results["identity_deviation"] = identity_deviation(map, marg);
  r.results["monotone"] = map.monotone;
  if (!a.cost.empty()) {
    const std::string kind = head_tail(a.cost).first;
    if (kind != "x2k2") throw InputError("monge cost must be given as a function; only x2k2 is supported here");
    r.config["cost"] = a.cost;
    r.results["monge_cost"] = monge_cost(map, marg, x2k2_cost());
  }
  r.check("pushforward_defect", defect, 1e-8, defect <= 1e-8);
  r.check("monotone", map.monotone ? 0.0 : 1.0, 0.0, map.monotone);
  if (!a.map_out.empty()) {
    std::string text = "x,T\n";
    for (int i = 0; i < g.N(); ++i) text += io::format_number(g.x_at(i)) + "," + io::format_number(map.map_values[i]) + "\n";
    io::write_atomic(a.map_out, text);
  }
  return r;
}

Report cmd_product(CLI::App* app, Common& c, const TransportArgs& a) {
  const CenteredGrid g = c.build(app);
  const StateVector phi = parse_state(require(a.state, "--state"), g);
  const CostMatrix cost = parse_cost(require(a.cost, "--cost"), g);
  const auto marg = marginals(phi);
  const Coupling gamma = product_coupling(marg);
  Report r;
  r.command = "transport product";
  r.config = Json{{"grid", grid_json(g)}, {"state", a.state}, {"cost", a.cost}};
  r.results["value"] = coupling_cost(gamma, cost.entries);
  r.results["marginal_defect"] = gamma.marginal_defect();
  r.results["support_size"] = gamma.support_size(a.threshold);
  if (!a.coupling_out.empty()) io::write_atomic(a.coupling_out, io::coupling_csv(gamma, -g.M(), -g.M(), a.threshold));
  return r;
}

Report cmd_strassen(CLI::App* app, Common& c, const TransportArgs& a) {
  Report r;
  r.command = "transport strassen";
  std::vector<double> p, q;
  std::vector<unsigned char> mask;
  if (!a.state.empty()) {
    const CenteredGrid g = c.build(app);
    if (static_cast<std::size_t>(g.N()) > kMaxStrassenSize) {
      throw DomainError("strassen enumeration needs N <= " + std::to_string(kMaxStrassenSize));
    }
    const auto marg = marginals(parse_state(a.state, g));
    const PhaseRegion region = parse_region(require(a.region, "--region"), g);
    p = marg.p;
    q = marg.q;
    mask = region.mask;
    r.config = Json{{"grid", grid_json(g)}, {"state", a.state}, {"region", a.region}};
  } else {
    if (a.size < 1 || static_cast<std::size_t>(a.size) > kMaxStrassenSize) {
      throw DomainError("--N must lie in [1, " + std::to_string(kMaxStrassenSize) + "]");
    }
    Rng rng(c.seed);
    const std::size_t n = a.size;
    p.resize(n);
    q.resize(n);
    mask.resize(n * n);
    double sp = 0.0, sq = 0.0;
    for (double& w : p) sp += (w = rng.uniform());
    for (double& w : q) sq += (w = rng.uniform());
    for (double& w : p) w /= sp;
    for (double& w : q) w /= sq;
    for (auto& b : mask) b = rng.uniform() < 0.5;
    r.config = Json{{"N", a.size}, {"seed", c.seed}};
  }
  const StrassenResult s = strassen_bruteforce(p, q, mask);
  r.results["lp_value"] = s.lp_value;
  r.results["sup_value"] = s.sup_value;
  std::vector<int> set, image;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (s.best_set >> i & 1u) set.push_back(static_cast<int>(i));
  for (std::size_t j = 0; j < q.size(); ++j)
    if (s.best_image >> j & 1u) image.push_back(static_cast<int>(j));
  r.results["best_set"] = set;
  r.results["best_image"] = image;
  const double diff = std::abs(s.lp_value - s.sup_value);
  r.check("lp_equals_sup", diff, 1e-8, diff <= 1e-8);
  return r;
}

struct BoundsArgs {
  std::string state;
  std::string A = "all";
  std::string B = "all";
  std::string region;
  int restarts = 8;
  int count = 8;
  double power = 2.0;
  double alpha = 0.1;
  double beta = 50.0;
  std::string trace_out;
  double R = 1.0;
  std::string rho = "auto";
  double sigma = 2.0;
  double kappa = 1.0;
  double lam = 1.0;
};

Json constants_json(const BoundParams& params, bool defaults) {
  Json j{{"alpha", params.alpha}, {"beta", params.beta}};
  if (defaults) j["label"] = BoundParams::kDefaultLabel;
  return j;
}

Report cmd_nazarov(CLI::App* app, CLI::App* sub, Common& c, const BoundsArgs& a) {
  const CenteredGrid g = c.build(app);
  const StateVector phi = parse_state(require(a.state, "--state"), g);
  const IntervalSet A = parse_intervals(a.A), B = parse_intervals(a.B);
  const BoundParams params{a.alpha, a.beta, 1, std::nullopt};
  const bool defaults = !sub->count("--alpha") && !sub->count("--beta");
  Report r;
  r.command = "bounds nazarov";
  r.config = Json{{"grid", grid_json(g)}, {"state", a.state}, {"A", a.A}, {"B", a.B},
                  {"constants", constants_json(params, defaults)}};
  const double lhs = nazarov_lhs(phi, A, B);
  const double e = eta(A, B, params);
  const double rhs = params.alpha * std::exp(-params.beta * e);
  r.results["lhs"] = lhs;
  r.results["eta"] = e;
  r.results["rhs"] = rhs;
  r.results["holds"] = lhs >= rhs;
  r.results["position_mass"] = position_mass(phi, A);
  r.results["momentum_mass"] = momentum_mass(phi, B);
  return r;
}

Report cmd_steiner(CLI::App* app, Common& c, const BoundsArgs& a) {
  const CenteredGrid g = c.build(app);
  const StateVector phi = parse_state(require(a.state, "--state"), g);
  const SteinerResult s = steiner_bound(phi, parse_intervals(a.A), parse_intervals(a.B));
  Report r;
  r.command = "bounds steiner";
  r.config = Json{{"grid", grid_json(g)}, {"state", a.state}, {"A", a.A}, {"B", a.B}};
  r.results["alpha"] = s.alpha;
  r.results["beta"] = s.beta;
  r.results["c1"] = s.c1;
  r.results["c2"] = s.c2;
  r.results["measure_product"] = s.measure_product;
  r.results["continuous_product"] = s.continuous_product;
  r.results["applicable"] = s.applicable;
  r.results["holds"] = s.holds;
  if (s.applicable) r.check("steiner", s.measure_product - std::max(s.c1, s.c2), -1e-9, s.holds);
  return r;
}

Report cmd_malinnikova(CLI::App* app, Common& c, const BoundsArgs& a) {
  const CenteredGrid g = c.build(app);
  if (a.count < 0 || a.count > kMaxHermiteOrder + 1) throw DomainError("--count out of range");
  std::vector<StateVector> states;
  for (int j = 0; j < a.count; ++j) states.push_back(hermite_state(j, g));
  const MalinnikovaResult m = malinnikova_check(states, parse_intervals(a.A), parse_intervals(a.B));
  const MomentSum moments = moment_sum(states, a.power);
  Report r;
  r.command = "bounds malinnikova";
  r.config = Json{{"grid", grid_json(g)}, {"states", "hermite 0.." + std::to_string(a.count - 1)}, {"A", a.A},
                  {"B", a.B}, {"power", a.power}};
  r.results["lhs"] = m.lhs;
  r.results["rhs"] = m.rhs;
  r.results["continuous_lhs"] = m.continuous_lhs;
  r.results["gram_defect"] = m.gram_defect;
  r.results["holds"] = m.holds;
  r.results["moment_sum"] = moments.value;
  r.results["moment_constant"] = moments.constant;
  r.check("malinnikova", m.lhs - m.rhs, 1e-9, m.holds);
  return r;
}

Report cmd_eprob(CLI::App* app, CLI::App* sub, Common& c, const BoundsArgs& a) {
  const CenteredGrid g = c.build(app);
  const PhaseRegion region = parse_region(require(a.region, "--region"), g);
  const EprobResult e = eprob_estimate(region, a.restarts, c.seed);
  const BoundParams params{a.alpha, a.beta, 1, std::nullopt};
  const bool defaults = !sub->count("--alpha") && !sub->count("--beta");
  Report r;
  r.command = "bounds eprob";
  r.config = Json{{"grid", grid_json(g)}, {"region", a.region}, {"restarts", a.restarts}, {"seed", c.seed},
                  {"constants", constants_json(params, defaults)}};
  r.results["best_value"] = e.best_value;
  r.results["best_restart"] = e.best_restart;
  r.results["region_measure"] = region.measure();
  r.results["upper_bound"] = eprob_upper(region, params);
  r.results["steps"] = e.trace.size();
  r.results["non_monotone_steps"] =
      std::count_if(e.trace.begin(), e.trace.end(), [](const EprobStep& s) { return s.decreased; });
  if (!a.trace_out.empty()) {
    std::string text = "restart,iteration,objective,decreased\n";
    for (const EprobStep& s : e.trace) {
      text += std::to_string(s.restart) + "," + std::to_string(s.iteration) + "," + io::format_number(s.objective) +
              "," + (s.decreased ? "1" : "0") + "\n";
    }
    io::write_atomic(a.trace_out, text);
  }
  return r;
}

Report cmd_chernoff(const BoundsArgs& a) {
  if (!(a.sigma > 1.0) && a.rho == "auto") throw InputError("--rho auto needs sigma > 1");
  const double rho = a.rho == "auto" ? max_chernoff_rho(a.sigma) : to_number(a.rho, "rho");
  const ChernoffResult ch = erfc_chernoff(a.R, rho, a.sigma, a.kappa, a.lam);
  Report r;
  r.command = "bounds chernoff";
  r.config = Json{{"R", a.R}, {"rho", rho}, {"sigma", a.sigma}, {"kappa", a.kappa}, {"lambda", a.lam}};
  r.results["erfc"] = ch.erfc_value;
  r.results["lower_value"] = ch.lower_value;
  r.results["upper_value"] = ch.upper_value;
  r.results["lower_params_valid"] = ch.lower_params_valid;
  r.results["upper_params_valid"] = ch.upper_params_valid;
  r.results["lower_ok"] = ch.lower_ok;
  r.results["upper_ok"] = ch.upper_ok;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete quantum optimal transport toolkit", "qot"};
  app.require_subcommand(1);
  Common common;

  auto* eig = app.add_subcommand("eig", "FGH eigenpairs of k^2/(2m) + V");
  std::string potential, p_field, vectors_out;
  double lambda = 1.0, hbar = 1.0, mass_value = 0.0;
  int count = 5;
  eig->add_option("--potential", potential, "harmonic | cosh | quartic | zero (default mass 1)");
  eig->add_option("--p-field", p_field, "sinh | tanh | linear; V = p^2 - p' + lambda (default mass 1/2)");
  eig->add_option("--lambda", lambda, "eigenvalue shift for --p-field");
  eig->add_option("--count", count, "number of eigenpairs")->check(CLI::PositiveNumber);
  eig->add_option("--mass", mass_value, "particle mass")->check(CLI::PositiveNumber);
  eig->add_option("--hbar", hbar, "reduced Planck constant")->check(CLI::PositiveNumber);
  eig->add_option("--vectors-out", vectors_out, "CSV file for the eigenvectors");
  common.attach(eig);

  auto* energy = app.add_subcommand("energy", "Schrodinger energy, diagonal plan energy and Euler residual");
  std::string state_spec, cost_spec;
  energy->add_option("--state", state_spec, "hermite:<n> | pfield:<name>[:lambda] | file:<path>");
  energy->add_option("--cost", cost_spec, "x2k2 | separable:<V>[:c] | indicator:<region> | file:<path>");
  common.attach(energy);

  auto* transport = app.add_subcommand("transport", "Kantorovich, Monge, product and Strassen computations");
  transport->require_subcommand(1);
  TransportArgs ta;
  auto add_transport = [&](const char* name, const char* desc) {
    auto* sub = transport->add_subcommand(name, desc);
    sub->add_option("--state", ta.state, "state spec");
    sub->add_option("--cost", ta.cost, "cost spec");
    sub->add_option("--threshold", ta.threshold, "weights at or below this are dropped from coupling output");
    common.attach(sub);
    return sub;
  };
  auto* kant = add_transport("kantorovich", "optimal coupling by the transportation simplex");
  kant->add_option("--coupling-out", ta.coupling_out, "CSV file m,n,weight");
  kant->add_option("--duals-out", ta.duals_out, "CSV file of dual potentials");
  auto* monge = add_transport("monge", "monotone rearrangement G^-1 o F");
  monge->add_option("--map-out", ta.map_out, "CSV file x,T");
  auto* product = add_transport("product", "product coupling p (x) q");
  product->add_option("--coupling-out", ta.coupling_out, "CSV file m,n,weight");
  auto* strassen = add_transport("strassen", "LP value versus exhaustive subset supremum");
  strassen->add_option("--N", ta.size, "size of a random instance (when --state is absent)");
  strassen->add_option("--region", ta.region, "region spec (with --state)");

  auto* bounds = app.add_subcommand("bounds", "uncertainty and concentration bounds");
  bounds->require_subcommand(1);
  BoundsArgs ba;
  auto add_bounds = [&](const char* name, const char* desc) {
    auto* sub = bounds->add_subcommand(name, desc);
    common.attach(sub);
    return sub;
  };
  auto add_sets = [&](CLI::App* sub) {
    sub->add_option("--A", ba.A, "position set: lo,hi[;lo,hi...] | all | empty");
    sub->add_option("--B", ba.B, "momentum set: lo,hi[;lo,hi...] | all | empty");
  };
  auto* nazarov = add_bounds("nazarov", "escaping mass versus alpha exp(-beta eta)");
  nazarov->add_option("--state", ba.state, "state spec");
  add_sets(nazarov);
  nazarov->add_option("--alpha", ba.alpha, "constant alpha (default is illustrative)");
  nazarov->add_option("--beta", ba.beta, "constant beta (default is illustrative)");
  auto* steiner = add_bounds("steiner", "Steiner lower bound on |A||B|");
  steiner->add_option("--state", ba.state, "state spec");
  add_sets(steiner);
  auto* malin = add_bounds("malinnikova", "localization inequality and moment sum for Hermite families");
  malin->add_option("--count", ba.count, "number of Hermite states");
  malin->add_option("--power", ba.power, "moment power p");
  add_sets(malin);
  auto* eprob = add_bounds("eprob", "heuristic estimate of e(Lambda)");
  eprob->add_option("--region", ba.region, "disk:R | square:R | box:a,b | cobox:a,b | full | none | file:<path>");
  eprob->add_option("--restarts", ba.restarts, "number of starting states")->check(CLI::PositiveNumber);
  eprob->add_option("--alpha", ba.alpha, "constant alpha for the upper bound (illustrative default)");
  eprob->add_option("--beta", ba.beta, "constant beta for the upper bound (illustrative default)");
  eprob->add_option("--trace-out", ba.trace_out, "CSV file of the iteration log");
  auto* chernoff = add_bounds("chernoff", "Chernoff-type envelopes of erfc");
  chernoff->add_option("--R", ba.R, "evaluation point");
  chernoff->add_option("--rho", ba.rho, "lower envelope factor or 'auto' for the largest admissible");
  chernoff->add_option("--sigma", ba.sigma, "lower envelope exponent");
  chernoff->add_option("--kappa", ba.kappa, "upper envelope factor");
  chernoff->add_option("--lambda", ba.lam, "upper envelope exponent");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  VerifyOptions vo;
  verify->add_option("--perturb-U", vo.perturb_u, "add this to one UCDFT entry (fault injection)");
  common.attach(verify);

  std::vector<const char*> argv{"qot"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (common.json) common.format = "json";
    Report report;
    if (eig->parsed()) {
      std::optional<double> mass;
      if (eig->count("--mass")) mass = mass_value;
      report = cmd_eig(eig, common, potential, p_field, lambda, count, mass, hbar, vectors_out);
    } else if (energy->parsed()) {
      report = cmd_energy(energy, common, state_spec, cost_spec);
    } else if (kant->parsed()) {
      report = cmd_kantorovich(kant, common, ta);
    } else if (monge->parsed()) {
      report = cmd_monge(monge, common, ta);
    } else if (product->parsed()) {
      report = cmd_product(product, common, ta);
    } else if (strassen->parsed()) {
      report = cmd_strassen(strassen, common, ta);
    } else if (nazarov->parsed()) {
      report = cmd_nazarov(nazarov, nazarov, common, ba);
    } else if (steiner->parsed()) {
      report = cmd_steiner(steiner, common, ba);
    } else if (malin->parsed()) {
      report = cmd_malinnikova(malin, common, ba);
    } else if (eprob->parsed()) {
      report = cmd_eprob(eprob, eprob, common, ba);
    } else if (chernoff->parsed()) {
      report = cmd_chernoff(ba);
    } else if (verify->parsed()) {
      if (verify->count("--L")) vo.grid.length = common.length;
      vo.grid.M = common.grid.M;
      report = run_verify(vo);
    } else {
      err << "error: no command given\n";
      return kConfigError;
    }

    const std::string text = common.format == "json" ? report.to_json() : report.to_csv();
    if (common.output.empty()) {
      out << text;
    } else {
      io::write_atomic(common.output, text);
    }
    if (!report.all_pass()) {
      for (const Check& c : report.checks)
        if (!c.pass) err << "check failed: " << c.name << " (value " << io::format_number(c.value) << ")\n";
      return kCheckFailed;
    }
    return kOk;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  }
}

}  // namespace qot::cli
