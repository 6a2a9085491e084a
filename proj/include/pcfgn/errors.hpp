#pragma once

#include <stdexcept>
#include <string>

namespace pcfgn {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: out-of-domain parameters, malformed data, inconsistent configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Raised by compare() when the two models do not share their hyperpriors.
class MismatchedPriors : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmbeddingFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonMonotoneDistance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureNonFinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pcfgn
