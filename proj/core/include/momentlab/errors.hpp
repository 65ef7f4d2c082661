#pragma once

#include <stdexcept>
#include <string>

namespace momentlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, malformed files, out-of-range queries. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation that needs exact values was handed an approximate sequence (or vice versa).
class BackendError : public InputError {
 public:
  using InputError::InputError;
};

/// Quadrature non-convergence and similar numerical failures. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace momentlab
