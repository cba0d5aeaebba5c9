#include "qot/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qot/errors.hpp"

namespace qot {

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
  for (const Interval& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi) throw InputError("interval with lo > hi");
  }
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const Interval& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(iv);
    }
  }
}

IntervalSet IntervalSet::whole_line() {
  const double inf = std::numeric_limits<double>::infinity();
  return IntervalSet({{-inf, inf}});
}

bool IntervalSet::contains(double t) const noexcept {
  for (const Interval& iv : intervals_)
    if (t >= iv.lo && t <= iv.hi) return true;
  return false;
}

double IntervalSet::total_length() const noexcept {
  double total = 0.0;
  for (const Interval& iv : intervals_) total += iv.hi - iv.lo;
  return total;
}

std::size_t PhaseRegion::count() const noexcept {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](unsigned char b) { return b != 0; }));
}

double PhaseRegion::measure() const noexcept { return static_cast<double>(count()) * grid.dx() * grid.dk(); }

namespace {

template <class Pred>
PhaseRegion build(const CenteredGrid& grid, std::string description, Pred inside) {
  const std::size_t n = grid.N();
  PhaseRegion out{grid, std::vector<unsigned char>(n * n, 0), std::move(description)};
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t j = 0; j < n; ++j) out.mask[m * n + j] = inside(grid.x_at(m), grid.k_at(j)) ? 1 : 0;
  return out;
}

}  // namespace

PhaseRegion PhaseRegion::disk(const CenteredGrid& grid, double radius) {
  if (!(radius >= 0.0)) throw DomainError("disk radius must be nonnegative");
  const double r2 = radius * radius;
  return build(grid, "disk(" + std::to_string(radius) + ")",
               [r2](double x, double k) { return x * x + k * k <= r2; });
}

PhaseRegion PhaseRegion::square(const CenteredGrid& grid, double radius) {
  if (!(radius >= 0.0)) throw DomainError("square half-width must be nonnegative");
  return build(grid, "square(" + std::to_string(radius) + ")",
               [radius](double x, double k) { return std::abs(x) <= radius && std::abs(k) <= radius; });
}

PhaseRegion PhaseRegion::product(const CenteredGrid& grid, const IntervalSet& a, const IntervalSet& b) {
  return build(grid, "product", [&](double x, double k) { return a.contains(x) && b.contains(k); });
}

PhaseRegion PhaseRegion::complement_of_box(const CenteredGrid& grid, double a, double b) {
  return build(grid, "complement_of_box", [a, b](double x, double k) { return !(std::abs(x) < a && std::abs(k) < b); });
}

PhaseRegion PhaseRegion::full(const CenteredGrid& grid) {
  return build(grid, "full", [](double, double) { return true; });
}

PhaseRegion PhaseRegion::none(const CenteredGrid& grid) {
  return build(grid, "none", [](double, double) { return false; });
}

}  // namespace qot
