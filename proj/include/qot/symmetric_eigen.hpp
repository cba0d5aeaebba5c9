#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qot {

/// Full eigendecomposition of a dense real symmetric matrix.
struct SymmetricEigen {
  std::size_t n = 0;
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // n×n, eigenvector j stored contiguously at [j*n, (j+1)*n)

  std::span<const double> vector(std::size_t j) const { return {vectors.data() + j * n, n}; }
};

/// Householder tridiagonalization followed by implicit-shift QL iteration.
/// `matrix` is row-major n×n; only symmetry up to rounding is assumed (the
/// lower triangle is read). Throws NumericError if an eigenvalue fails to
/// converge within `max_sweeps` QL sweeps.
SymmetricEigen symmetric_eigen(std::span<const double> matrix, std::size_t n, int max_sweeps = 60);

}  // namespace qot
