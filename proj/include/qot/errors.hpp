#pragma once

#include <stdexcept>
#include <string>

namespace qot {

// Argument outside the mathematical domain of an operation (bad length,
// non-finite sample, order too large, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally invalid input: grid mismatch, marginals that do not balance,
// a non-symplectic map, a missing width provider.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine failed to converge.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, long iterations)
      : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}

  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

// Operation is well defined in general but not supported for this input.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qot
