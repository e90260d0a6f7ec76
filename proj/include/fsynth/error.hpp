#pragma once

#include <stdexcept>
#include <string>

namespace fsynth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad shapes, out-of-range parameters, non-finite samples.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Requested truncation order exceeds the node count, so retained
/// coefficients would alias.
class AliasingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A stability estimate was requested outside the hypotheses under which it
/// holds. The message names the violated inequality.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Result fell below the representable floor (1e-300).
class UnderflowError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

inline void require_hypothesis(bool ok, const std::string& inequality) {
  if (!ok) throw HypothesisError("hypothesis violated: " + inequality);
}

}  // namespace detail
}  // namespace fsynth
