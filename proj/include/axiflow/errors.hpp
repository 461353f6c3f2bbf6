#pragma once

#include <stdexcept>
#include <string>

namespace axiflow {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point, parameter or time lies outside the region where an object is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Bad user input: configuration, missing parameters, inconsistent grids.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown (step size underflow, non-convergence, overflowing series).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The axial velocity changed sign where a one-directional flow is required.
class UnilateralViolation : public Error {
 public:
  using Error::Error;
};

/// A streamline map lost monotonicity or its lines crossed.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A query outside the range covered by a computed map or trajectory.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Curvature too small for the normal and binormal to be defined.
class FrameUndefined : public Error {
 public:
  using Error::Error;
};

/// More than one nearest trajectory point within the tube radius.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// The speed vanished where a regular parametrization is needed.
class StagnationError : public Error {
 public:
  using Error::Error;
};

/// An operation needs an exact Euler field but none was certified.
class NotCertified : public Error {
 public:
  using Error::Error;
};

/// An output file could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace axiflow
