#include "qot/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "qot/errors.hpp"
#include "qot/states.hpp"

namespace qot {

namespace {

BlockMap::Kind classify(double a, double b, double c, double d) {
  if (b == 0.0 && c == 0.0) return BlockMap::Kind::diagonal;
  if (a == 0.0 && d == 0.0) return BlockMap::Kind::antidiagonal;
  return BlockMap::Kind::general;
}

void require_position(const StateVector& state) {
  if (state.representation() != Representation::position) throw InputError("expected a position-space state");
}

}  // namespace

BlockMap BlockMap::diagonal(double a) {
  if (a == 0.0 || !std::isfinite(a)) throw DomainError("diagonal block must be nonzero and finite");
  return {a, 0.0, 0.0, 1.0 / a, Kind::diagonal};
}

BlockMap BlockMap::antidiagonal(double b) {
  if (b == 0.0 || !std::isfinite(b)) throw DomainError("antidiagonal block must be nonzero and finite");
  return {0.0, b, -1.0 / b, 0.0, Kind::antidiagonal};
}

BlockMap BlockMap::general(double a, double b, double c, double d) { return {a, b, c, d, classify(a, b, c, d)}; }

bool BlockMap::is_symplectic(double tol) const noexcept { return std::abs(determinant() - 1.0) <= tol; }

BlockMap compose(const BlockMap& s, const BlockMap& f) {
  return BlockMap::general(s.a * f.a + s.b * f.c, s.a * f.b + s.b * f.d, s.c * f.a + s.d * f.c,
                           s.c * f.b + s.d * f.d);
}

double PhaseDensity::mass() const noexcept {
  double total = 0.0;
  for (double v : values) total += v;
  return total * grid.dx() * grid.dk();
}

double PhaseDensity::max_difference(const PhaseDensity& other) const {
  if (!(grid == other.grid)) throw InputError("densities live on different grids");
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) worst = std::max(worst, std::abs(values[i] - other.values[i]));
  return worst;
}

PhaseDensity product_density(const StateVector& state) {
  require_position(state);
  const CenteredGrid& g = state.grid();
  const std::size_t n = g.N();
  const auto spectrum = ucdft(g, state.amplitudes());
  PhaseDensity out{g, std::vector<double>(n * n)};
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t j = 0; j < n; ++j) out.values[m * n + j] = std::norm(state[m]) * std::norm(spectrum[j]);
  return out;
}

PhaseDensity pushforward_density(const StateVector& state, const BlockMap& map) {
  require_position(state);
  if (!map.is_symplectic()) throw InputError("map is not symplectic (ad - bc = " + std::to_string(map.determinant()) + ")");
  const CenteredGrid& g = state.grid();
  const std::size_t n = g.N();
  const auto spectrum = ucdft(g, state.amplitudes());

  // Off-grid points repeat along rows or columns for the structured maps.
  std::unordered_map<double, double> pos_cache, mom_cache;
  auto pos_density = [&](double y) {
    auto [it, fresh] = pos_cache.try_emplace(y, 0.0);
    if (fresh) it->second = std::norm(interpolate_position(g, spectrum, y));
    return it->second;
  };
  auto mom_density = [&](double k) {
    auto [it, fresh] = mom_cache.try_emplace(k, 0.0);
    if (fresh) it->second = std::norm(interpolate_momentum(g, state.amplitudes(), k));
    return it->second;
  };

  PhaseDensity out{g, std::vector<double>(n * n)};
  for (std::size_t m = 0; m < n; ++m) {
    const double xi = g.x_at(m);
    for (std::size_t j = 0; j < n; ++j) {
      const double eta = g.k_at(j);
      const double x = map.d * xi - map.b * eta;
      const double k = -map.c * xi + map.a * eta;
      out.values[m * n + j] = pos_density(x) * mom_density(k);
    }
  }
  return out;
}

StateVector fourier_as_position(const StateVector& state) {
  require_position(state);
  const CenteredGrid& g = state.grid();
  if (!g.is_calibrated()) throw InputError("reading the transform as a position state needs a calibrated grid");
  return StateVector(g, ucdft(g, state.amplitudes()));
}

SubgroupIdentity verify_subgroup_identity(const StateVector& state, const BlockMap& map) {
  require_position(state);
  const BlockMap::Kind kind = classify(map.a, map.b, map.c, map.d);
  if (kind == BlockMap::Kind::general) {
    throw UnsupportedError("subgroup identities cover only diagonal and antidiagonal maps");
  }
  if (!map.is_symplectic()) throw InputError("map is not symplectic");
  const PhaseDensity pushed = pushforward_density(state, map);

  if (kind == BlockMap::Kind::diagonal) {
    if (!(map.a > 0.0)) throw UnsupportedError("diagonal identity is implemented for a > 0");
    const StateVector target = scale_state(state, 1.0 / map.a);
    return {pushed.max_difference(product_density(target)), kind};
  }
  if (!(map.b > 0.0)) throw UnsupportedError("antidiagonal identity is implemented for b > 0");
  const StateVector target = fourier_as_position(scale_state(state, map.b));
  return {pushed.max_difference(product_density(target)), kind};
}

}  // namespace qot
