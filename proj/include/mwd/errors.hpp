#pragma once

#include <stdexcept>
#include <string>

namespace mwd {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a value invariant (hermiticity, PSD, trace, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operands have incompatible dimensions or grids.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter lies outside its admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver ran out of budget before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, long iterations, double gap,
                   double residual)
      : Error(what), iterations_(iterations), gap_(gap), residual_(residual) {}

  long iterations() const noexcept { return iterations_; }
  double gap() const noexcept { return gap_; }
  double residual() const noexcept { return residual_; }

 private:
  long iterations_;
  double gap_;
  double residual_;
};

}  // namespace mwd
