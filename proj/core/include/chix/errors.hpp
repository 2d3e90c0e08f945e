#pragma once

#include <stdexcept>
#include <string>

namespace chix {

// Parameter / domain violations map to CLI exit code 2.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Resource limits (grid too large, table range exceeded) map to exit code 3.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures (factorization, quadrature breakdown) map to exit code 4.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace chix
