#include "qot/transport.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "qot/errors.hpp"

namespace qot {

double Coupling::marginal_defect() const noexcept {
  double defect = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += weights[i * cols + j];
    defect = std::max(defect, std::abs(s - row_marginal[i]));
  }
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += weights[i * cols + j];
    defect = std::max(defect, std::abs(s - col_marginal[j]));
  }
  return defect;
}

double Coupling::min_weight() const noexcept {
  return weights.empty() ? 0.0 : *std::min_element(weights.begin(), weights.end());
}

std::size_t Coupling::support_size(double threshold) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(weights.begin(), weights.end(), [threshold](double w) { return w > threshold; }));
}

double coupling_cost(const Coupling& coupling, std::span<const double> cost) {
  if (cost.size() != coupling.weights.size()) throw InputError("cost and coupling sizes differ");
  double total = 0.0;
  for (std::size_t c = 0; c < cost.size(); ++c) total += cost[c] * coupling.weights[c];
  return total;
}

double TransportResult::dual_infeasibility(std::span<const double> cost) const {
  const std::size_t R = dual_x.size(), C = dual_k.size();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) worst = std::max(worst, dual_x[i] + dual_k[j] - cost[i * C + j]);
  return worst;
}

double TransportResult::slackness_violation(std::span<const double> cost, double threshold) const {
  const std::size_t R = dual_x.size(), C = dual_k.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j)
      if (coupling(i, j) > threshold) worst = std::max(worst, std::abs(cost[i * C + j] - dual_x[i] - dual_k[j]));
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

// Basis of the transportation simplex: R+C-1 cells forming a spanning tree
// of the bipartite graph rows ∪ columns. Node ids are rows 0..R-1 and
// columns R..R+C-1.
class TransportSimplex {
 public:
  TransportSimplex(std::span<const double> supply, std::span<const double> demand, std::span<const double> cost,
                   const TransportOptions& options)
      : R_(supply.size()),
        C_(demand.size()),
        cost_(cost),
        options_(options),
        adj_(R_ + C_),
        basic_(R_ * C_, 0),
        u_(R_),
        v_(C_),
        parent_(R_ + C_),
        stamp_(R_ + C_, 0) {
    northwest_corner(supply, demand);
  }

  long solve() {
    const long cap = options_.max_iterations > 0 ? options_.max_iterations
                                                 : 50L * static_cast<long>(R_ * C_) + 1000L;
    bool bland = options_.pricing == PricingRule::bland;
    int degenerate = 0;
    long iterations = 0;
    compute_duals();
    for (;;) {
      const std::size_t entering = bland ? price_bland() : price_dantzig();
      if (entering == kNone) break;
      if (++iterations > cap) throw NumericError("transportation simplex exceeded its pivot cap", iterations - 1);
      const double theta = pivot(entering);
      if (theta <= 0.0) {
        if (++degenerate >= options_.degenerate_streak) bland = true;
      } else {
        degenerate = 0;
      }
      compute_duals();
    }
    return iterations;
  }

  std::vector<double> flows() const {
    std::vector<double> out(R_ * C_, 0.0);
    for (const Cell& c : cells_)
      if (c.alive) out[c.i * C_ + c.j] = std::max(0.0, c.flow);
    return out;
  }

  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static constexpr double kRelTol = 1e-13;

  struct Cell {
    std::size_t i;
    std::size_t j;
    double flow;
    bool alive;
  };

  std::size_t add_cell(std::size_t i, std::size_t j, double flow) {
    std::size_t slot;
    if (!free_.empty()) {
      slot = free_.back();
      free_.pop_back();
      cells_[slot] = {i, j, flow, true};
    } else {
      slot = cells_.size();
      cells_.push_back({i, j, flow, true});
    }
    adj_[i].push_back(slot);
    adj_[R_ + j].push_back(slot);
    basic_[i * C_ + j] = 1;
    return slot;
  }

  void remove_cell(std::size_t slot) {
    Cell& c = cells_[slot];
    auto drop = [slot](std::vector<std::size_t>& list) { list.erase(std::find(list.begin(), list.end(), slot)); };
    drop(adj_[c.i]);
    drop(adj_[R_ + c.j]);
    basic_[c.i * C_ + c.j] = 0;
    c.alive = false;
    free_.push_back(slot);
  }

  // Staircase basis with exactly R+C-1 cells; degenerate zeros are kept so
  // the basis stays a spanning tree.
  void northwest_corner(std::span<const double> supply, std::span<const double> demand) {
    std::vector<double> a(supply.begin(), supply.end());
    std::vector<double> b(demand.begin(), demand.end());
    std::size_t i = 0, j = 0;
    for (;;) {
      const double x = std::max(0.0, std::min(a[i], b[j]));
      add_cell(i, j, x);
      a[i] -= x;
      b[j] -= x;
      if (i == R_ - 1 && j == C_ - 1) break;
      if (i == R_ - 1) {
        ++j;
      } else if (j == C_ - 1) {
        ++i;
      } else if (a[i] <= b[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  std::size_t other_end(std::size_t node, std::size_t slot) const {
    const Cell& c = cells_[slot];
    return node < R_ ? R_ + c.j : c.i;
  }

  // u_i + v_j = c_ij on the basis, rooted at row 0 with u_0 = 0.
  void compute_duals() {
    ++epoch_;
    queue_.clear();
    queue_.push_back(0);
    stamp_[0] = epoch_;
    u_[0] = 0.0;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::size_t node = queue_[head];
      for (std::size_t slot : adj_[node]) {
        const std::size_t next = other_end(node, slot);
        if (stamp_[next] == epoch_) continue;
        stamp_[next] = epoch_;
        const Cell& c = cells_[slot];
        const double cij = cost_[c.i * C_ + c.j];
        if (next >= R_) {
          v_[next - R_] = cij - u_[c.i];
        } else {
          u_[next] = cij - v_[c.j];
        }
        queue_.push_back(next);
      }
    }
  }

  double reduced(std::size_t i, std::size_t j) const { return cost_[i * C_ + j] - u_[i] - v_[j]; }

  // A reduced cost counts as negative only beyond the rounding level of the
  // three terms it is computed from.
  bool eligible(std::size_t i, std::size_t j, double d) const {
    return d < -kRelTol * (1.0 + std::abs(cost_[i * C_ + j]) + std::abs(u_[i]) + std::abs(v_[j]));
  }

  std::size_t price_dantzig() const {
    std::size_t best = kNone;
    double best_value = 0.0;
    for (std::size_t i = 0; i < R_; ++i) {
      const double* row = &cost_[i * C_];
      const double ui = u_[i];
      for (std::size_t j = 0; j < C_; ++j) {
        const double d = row[j] - ui - v_[j];
        if (d < best_value && !basic_[i * C_ + j] && eligible(i, j, d)) {
          best_value = d;
          best = i * C_ + j;
        }
      }
    }
    return best;
  }

  std::size_t price_bland() const {
    for (std::size_t i = 0; i < R_; ++i)
      for (std::size_t j = 0; j < C_; ++j)
        if (!basic_[i * C_ + j] && eligible(i, j, reduced(i, j))) return i * C_ + j;
    return kNone;
  }

  // Tree path from row r to column s as a list of slots, ordered from the
  // column end back to the row end.
  void tree_path(std::size_t r, std::size_t s, std::vector<std::size_t>& path) {
    ++epoch_;
    queue_.clear();
    queue_.push_back(r);
    stamp_[r] = epoch_;
    const std::size_t target = R_ + s;
    for (std::size_t head = 0; head < queue_.size() && stamp_[target] != epoch_; ++head) {
      const std::size_t node = queue_[head];
      for (std::size_t slot : adj_[node]) {
        const std::size_t next = other_end(node, slot);
        if (stamp_[next] == epoch_) continue;
        stamp_[next] = epoch_;
        parent_[next] = slot;
        queue_.push_back(next);
      }
    }
    path.clear();
    for (std::size_t node = target; node != r;) {
      const std::size_t slot = parent_[node];
      path.push_back(slot);
      node = other_end(node, slot);
    }
  }

  double pivot(std::size_t entering) {
    const std::size_t r = entering / C_, s = entering % C_;
    tree_path(r, s, path_);
    // Along the cycle (r,s) → path, signs alternate starting with '-' on the
    // path cell adjacent to column s.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = kNone;
    std::size_t leaving_key = kNone;
    for (std::size_t k = 0; k < path_.size(); k += 2) {
      const Cell& c = cells_[path_[k]];
      const double f = std::max(0.0, c.flow);
      const std::size_t key = c.i * C_ + c.j;
      // Ties go to the smallest cell index.
      if (f < theta || (f == theta && key < leaving_key)) {
        theta = f;
        leaving = path_[k];
        leaving_key = key;
      }
    }
    for (std::size_t k = 0; k < path_.size(); ++k) {
      Cell& c = cells_[path_[k]];
      c.flow += (k % 2 == 0) ? -theta : theta;
    }
    remove_cell(leaving);
    add_cell(r, s, theta);
    return theta;
  }

  std::size_t R_, C_;
  std::span<const double> cost_;
  TransportOptions options_;

  std::vector<Cell> cells_;
  std::vector<std::size_t> free_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<unsigned char> basic_;
  std::vector<double> u_, v_;

  std::vector<std::size_t> parent_;
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
  std::vector<std::size_t> queue_;
  std::vector<std::size_t> path_;
};

}  // namespace

TransportResult solve_transport(std::span<const double> p, std::span<const double> q, std::span<const double> cost,
                                const TransportOptions& options) {
  const std::size_t R = p.size(), C = q.size();
  if (R == 0 || C == 0) throw InputError("transport problem needs nonempty marginals");
  if (cost.size() != R * C) throw InputError("cost matrix size does not match marginals");
  for (double c : cost)
    if (!std::isfinite(c)) throw InputError("transport cost must be finite");
  for (double w : p)
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("row marginal has a negative or non-finite entry");
  for (double w : q)
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("column marginal has a negative or non-finite entry");
  const double sp = std::accumulate(p.begin(), p.end(), 0.0);
  const double sq = std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(sp - sq) > 1e-7) {
    throw InputError("marginal sums differ by " + std::to_string(std::abs(sp - sq)) + " (> 1e-7)");
  }
  if (!(sq > 0.0)) throw InputError("marginals carry no mass");
  if (options.dual_anchor >= R) throw InputError("dual anchor outside the row range");

  std::vector<double> demand(q.begin(), q.end());
  const double ratio = sp / sq;
  for (double& w : demand) w *= ratio;

  TransportSimplex simplex(p, demand, cost, options);
  TransportResult out;
  out.iterations = simplex.solve();

  out.coupling.rows = R;
  out.coupling.cols = C;
  out.coupling.weights = simplex.flows();
  out.coupling.row_marginal.assign(p.begin(), p.end());
  out.coupling.col_marginal = demand;
  out.value = coupling_cost(out.coupling, cost);

  out.dual_x = simplex.u();
  out.dual_k = simplex.v();
  const double shift = out.dual_x[options.dual_anchor];
  for (double& u : out.dual_x) u -= shift;
  for (double& v : out.dual_k) v += shift;
  out.dual_value = 0.0;
  for (std::size_t i = 0; i < R; ++i) out.dual_value += out.dual_x[i] * p[i];
  for (std::size_t j = 0; j < C; ++j) out.dual_value += out.dual_k[j] * demand[j];
  out.gap = out.value - out.dual_value;
  return out;
}

TransportResult kantorovich(const MarginalPair& marg, const CostMatrix& cost, TransportOptions options) {
  if (!(marg.grid == cost.grid)) throw InputError("marginals and cost live on different grids");
  options.dual_anchor = marg.grid.index(0);
  return solve_transport(marg.p, marg.q, cost.entries, options);
}

Coupling product_coupling(const MarginalPair& marg) {
  Coupling out;
  out.rows = marg.p.size();
  out.cols = marg.q.size();
  out.row_marginal = marg.p;
  out.col_marginal = marg.q;
  out.weights.resize(out.rows * out.cols);
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j) out.weights[i * out.cols + j] = marg.p[i] * marg.q[j];
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Cumulative masses of a normalized weight vector in two forms: lower sums
// L_n = Σ_{j≤n} w_j and upper sums S_n = Σ_{j>n} w_j. Knot -1 sits one
// spacing left of node 0 with L = 0, S = 1. A probability level s is carried
// as (s, 1-s) and read from whichever form is smaller.
// Levels within this relative distance of a knot level resolve to that knot.
constexpr double kLevelSnap = 1e-12;

struct Cdf {
  std::vector<double> lower;  // index n+1 for knot n, knot -1 at index 0
  std::vector<double> upper;
  double first_knot;
  double spacing;

  Cdf(std::span<const double> w, double first_node, double h) : first_knot(first_node - h), spacing(h) {
    const std::size_t n = w.size();
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    lower.assign(n + 1, 0.0);
    upper.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) lower[i + 1] = lower[i] + w[i] / total;
    for (std::size_t i = n; i-- > 0;) upper[i] = upper[i + 1] + w[i] / total;
  }

  std::size_t knots() const { return lower.size(); }
  double knot(std::size_t idx) const { return first_knot + spacing * static_cast<double>(idx); }

  // (lower, upper) level of the CDF at node index m, i.e. knot m+1.
  std::pair<double, double> level(std::size_t m) const { return {lower[m + 1], upper[m + 1]}; }

  // inf{t : G(t) ≥ s}
  double inverse(double s_lower, double s_upper) const {
    const std::size_t K = knots();
    if (s_lower <= 0.5) {
      if (s_lower <= 0.0) return knot(0);
      auto it = std::lower_bound(lower.begin(), lower.end(), s_lower * (1.0 - kLevelSnap));
      if (it == lower.end()) return knot(K - 1);
      const std::size_t n = static_cast<std::size_t>(it - lower.begin());
      if (n == 0 || *it <= s_lower * (1.0 + kLevelSnap)) return knot(n);
      const double a = lower[n - 1], b = lower[n];
      return knot(n - 1) + spacing * (s_lower - a) / (b - a);
    }
    // G(t) ≥ s ⇔ S(t) ≤ 1 - s; upper sums are non-increasing.
    if (s_upper <= 0.0) {
      // First knot whose survival vanishes.
      std::size_t n = 0;
      while (n + 1 < K && upper[n] > 0.0) ++n;
      if (n == 0) return knot(0);
      return knot(n);
    }
    auto it = std::lower_bound(upper.begin(), upper.end(), s_upper * (1.0 + kLevelSnap), std::greater<double>());
    if (it == upper.end()) return knot(K - 1);
    const std::size_t n = static_cast<std::size_t>(it - upper.begin());
    if (n == 0 || *it >= s_upper * (1.0 - kLevelSnap)) return knot(n);
    const double a = upper[n - 1], b = upper[n];
    return knot(n - 1) + spacing * (a - s_upper) / (a - b);
  }

  // Piecewise-linear G(t) as a (lower, upper) pair.
  std::pair<double, double> evaluate(double t) const {
    const double pos = (t - first_knot) / spacing;
    const std::size_t K = knots();
    if (pos <= 0.0) return {0.0, 1.0};
    if (pos >= static_cast<double>(K - 1)) return {1.0, 0.0};
    const std::size_t n = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(n);
    return {lower[n] + frac * (lower[n + 1] - lower[n]), upper[n] + frac * (upper[n + 1] - upper[n])};
  }
};

}  // namespace

bool is_monotone(std::span<const double> values) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (values[i] > values[i + 1] + 1e-12) return false;
  return true;
}

MongeMap monge_rearrangement(const MarginalPair& marg) {
  const CenteredGrid& g = marg.grid;
  const Cdf F(marg.p, g.x_at(0), g.dx());
  const Cdf G(marg.q, g.k_at(0), g.dk());
  MongeMap out{g, std::vector<double>(marg.p.size()), true};
  for (std::size_t m = 0; m < marg.p.size(); ++m) {
    const auto [lo, hi] = F.level(m);
    out.map_values[m] = G.inverse(lo, hi);
  }
  out.monotone = is_monotone(out.map_values);
  return out;
}

double monge_cost(const MongeMap& map, const MarginalPair& marg, const CostFunction& h) {
  double total = 0.0;
  for (std::size_t m = 0; m < marg.p.size(); ++m) total += h(marg.grid.x_at(m), map.map_values[m]) * marg.p[m];
  return total;
}

double pushforward_defect(const MongeMap& map, const MarginalPair& marg) {
  const CenteredGrid& g = marg.grid;
  if (map.map_values.size() != marg.p.size()) throw InputError("map and marginals have different sizes");
  const Cdf F(marg.p, g.x_at(0), g.dx());
  const Cdf G(marg.q, g.k_at(0), g.dk());
  double defect = 0.0;
  for (std::size_t m = 0; m < marg.p.size(); ++m) {
    const auto [flo, fhi] = F.level(m);
    const auto [glo, ghi] = G.evaluate(map.map_values[m]);
    defect = std::max(defect, flo <= 0.5 ? std::abs(glo - flo) : std::abs(ghi - fhi));
  }
  return defect;
}

double identity_deviation(const MongeMap& map, const MarginalPair& marg, double mass_floor) {
  double worst = 0.0;
  for (std::size_t m = 0; m < marg.p.size(); ++m)
    if (marg.p[m] >= mass_floor) worst = std::max(worst, std::abs(map.map_values[m] - marg.grid.x_at(m)));
  return worst;
}

// ---------------------------------------------------------------------------

StrassenResult strassen_bruteforce(std::span<const double> p, std::span<const double> q,
                                   std::span<const unsigned char> in_region) {
  const std::size_t R = p.size(), C = q.size();
  if (R > kMaxStrassenSize || C > 32) {
    throw DomainError("subset enumeration is limited to " + std::to_string(kMaxStrassenSize) + " rows");
  }
  if (in_region.size() != R * C) throw InputError("region mask size does not match marginals");

  std::vector<double> cost(R * C);
  for (std::size_t c = 0; c < cost.size(); ++c) cost[c] = in_region[c] ? 1.0 : 0.0;

  StrassenResult out;
  out.lp_value = solve_transport(p, q, cost).value;

  // Columns reachable outside U from each row.
  std::vector<std::uint32_t> outside(R, 0);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j)
      if (!in_region[i * C + j]) outside[i] |= (std::uint32_t{1} << j);

  const std::uint32_t subsets = std::uint32_t{1} << R;
  std::vector<std::uint32_t> image(subsets, 0);
  std::vector<double> mass_a(subsets, 0.0);
  out.sup_value = 0.0;  // A = ∅
  for (std::uint32_t s = 1; s < subsets; ++s) {
    const unsigned low = static_cast<unsigned>(std::countr_zero(s));
    const std::uint32_t rest = s & (s - 1);
    image[s] = image[rest] | outside[low];
    mass_a[s] = mass_a[rest] + p[low];
    double mass_image = 0.0;
    for (std::uint32_t bits = image[s]; bits; bits &= bits - 1) mass_image += q[std::countr_zero(bits)];
    const double value = mass_a[s] - mass_image;
    if (value > out.sup_value) {
      out.sup_value = value;
      out.best_set = s;
      out.best_image = image[s];
    }
  }
  return out;
}

StrassenResult strassen_bruteforce(const MarginalPair& marg, const PhaseRegion& region) {
  if (!(marg.grid == region.grid)) throw InputError("marginals and region live on different grids");
  return strassen_bruteforce(marg.p, marg.q, region.mask);
}

}  // namespace qot
