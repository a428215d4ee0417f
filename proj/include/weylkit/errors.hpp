#pragma once

#include <stdexcept>
#include <string>

namespace weylkit {

/// Bad input: dimension mismatch, domain violation, malformed file.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A representation parameter would be resolved outside the grid band.
class AliasingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure (non-convergence, non-finite intermediate values).
/// The CLI maps this to exit code 1.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace weylkit
