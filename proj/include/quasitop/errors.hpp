#pragma once

#include <stdexcept>

namespace quasitop {

// Numerical or physical precondition failure (closed gap, unstable grid, ...).
// Bad user input is std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quasitop
