#pragma once

#include <stdexcept>
#include <string>

namespace qdmaps {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix dimensions outside the supported set, or incompatible operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Value outside the mathematical domain of an operation (non-Hermitian input
/// where a Hermitian one is required, invalid density matrix, parameter out of
/// range, mixing factor outside [-1, 1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Singular or near-singular matrix; also used when an initial map cannot be
/// inverted to form an intermediate map. Carries the smallest singular value
/// (or the offending magnitude) that triggered the failure.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double smallest_sv)
      : Error(what), smallest_singular_value(smallest_sv) {}

  double smallest_singular_value;
};

/// Operation applied to a channel family it is not defined for.
class FamilyMismatchError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition (time ordering, empty grid, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The time-local generator does not exist at `time` (zero of the decoherence
/// function or of the scaled mixing factor).
class GeneratorSingularityError : public Error {
 public:
  GeneratorSingularityError(const std::string& what, double t)
      : Error(what), time(t) {}

  double time;
};

/// Requested representation does not exist for this family (e.g. a
/// time-independent Kraus set for a map that is not an elapsed-time channel
/// of the supported structure).
class UnsupportedRepresentationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdmaps
