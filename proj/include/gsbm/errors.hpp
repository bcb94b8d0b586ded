#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsbm {

// Precondition violations: invalid parameters, misaligned grids,
// out-of-range queries.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failures (quadrature budget exhausted, root bracketing lost).
// Carries the tolerance actually achieved when that is meaningful.
struct NumericError : std::runtime_error {
  double achieved_tolerance;
  explicit NumericError(const std::string& what,
                        double achieved = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), achieved_tolerance(achieved) {}
};

// Estimation failures: rank-deficient designs, non-converged likelihood
// searches.
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data; carries the 1-based offending line numbers.
struct IngestError : std::runtime_error {
  std::vector<long> lines;
  IngestError(const std::string& what, std::vector<long> bad_lines)
      : std::runtime_error(what), lines(std::move(bad_lines)) {}
};

// Filesystem-level problems (file missing, unwritable path).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gsbm
