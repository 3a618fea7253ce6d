#pragma once

#include <stdexcept>
#include <string>

namespace synckit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible matrix/vector shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid values in user-supplied data (negative weights, self-loops, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on inputs outside its contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numeric kernel failed (overflow, iteration breakdown).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An iterative estimate did not settle before its horizon cap.
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Eigenvalues sit too close to a classification boundary to split reliably.
class IllConditionedSplitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A boolean classification could not be decided at the given tolerance.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

/// The zero eigenvalue of a coupling matrix is not simple, so quantities
/// that assume a connected graph are undefined.
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

/// The Riccati equation has no stabilizing solution (pair not detectable).
class NoStabilizingSolutionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// No synthesis branch applies to the given pair.
class NoGuaranteeError : public Error {
 public:
  using Error::Error;
};

}  // namespace synckit
