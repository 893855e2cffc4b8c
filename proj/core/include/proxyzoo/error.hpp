#pragma once

#include <stdexcept>
#include <string>

namespace proxyzoo {

/// Input, configuration or precondition failure. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a usable result (non-PD covariance,
/// rank-deficient design, logarithm branch cut, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace proxyzoo
