#pragma once

#include <string>
#include <vector>

#include "qot/grid.hpp"

namespace qot {

/// Closed intervals on the real line, kept sorted and disjoint.
class IntervalSet {
 public:
  struct Interval {
    double lo;
    double hi;
  };

  IntervalSet() = default;
  /// Overlapping or touching intervals are merged; lo > hi is an InputError.
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet symmetric(double radius) { return IntervalSet({{-radius, radius}}); }
  static IntervalSet whole_line();

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool empty() const noexcept { return intervals_.empty(); }
  bool contains(double t) const noexcept;
  /// Lebesgue measure |A|.
  double total_length() const noexcept;

 private:
  std::vector<Interval> intervals_;
};

/// Boolean mask on the phase grid; mask(m, n) is true when (x_m, k_n) ∈ Λ.
struct PhaseRegion {
  CenteredGrid grid;
  std::vector<unsigned char> mask;  // row-major N×N, row = x-node
  std::string description;

  bool operator()(std::size_t m, std::size_t n) const noexcept { return mask[m * grid.N() + n] != 0; }
  std::size_t count() const noexcept;
  /// (count of true nodes)·dx·dk
  double measure() const noexcept;

  static PhaseRegion disk(const CenteredGrid& grid, double radius);
  static PhaseRegion square(const CenteredGrid& grid, double radius);
  static PhaseRegion product(const CenteredGrid& grid, const IntervalSet& a, const IntervalSet& b);
  /// Complement of the open box (-a, a) × (-b, b).
  static PhaseRegion complement_of_box(const CenteredGrid& grid, double a, double b);
  static PhaseRegion full(const CenteredGrid& grid);
  static PhaseRegion none(const CenteredGrid& grid);
};

}  // namespace qot
