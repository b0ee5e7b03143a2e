#pragma once

#include <stdexcept>

namespace nlsnorm {

// Failure taxonomy shared by all modules. std::invalid_argument is used for
// precondition violations; the CLI maps each type to a distinct exit code.

// A quadrature, fit or evolution produced NaN or missed its accuracy target.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The local-minimum / two-critical-point geometry is absent, e.g. the mass c
// is too large for the well to exist.
struct no_local_geometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solver ran out of iterations or step size.
struct convergence_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A parameter search (translation, threshold) exhausted its range.
struct search_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quantitative inequality that was expected to hold failed numerically.
struct check_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nlsnorm
