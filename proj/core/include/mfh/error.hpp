#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfh {

enum class ErrorKind {
  NotDivisible,
  PrecisionExhausted,
  FactorialNotInvertible,
  SyntaxError,
  NegativeExponentOnUninverted,
  NonInvertibleImage,
  ZeroElement,
  IncompatibleRings,
  InvalidRing,
  DenominatorCapExceeded,
  InvalidInput,
  InvalidLifting,
  WeightOverflow,
  PrecisionTooLow,
  AmbientMismatch,
  UnsupportedDimension,
  NotAUnit,
  ThetaUnstable,
  StrongDivisibilityFailure,
  HorizontalityViolation,
  GluingMismatch,
  NotPCurvatureZero,
  DegreeBoundExceeded,
  NotHorizontal,
  DescentFailure,
  NilpotencyTooDeep,
  MissingLifting,
  FixtureError,
};

std::string_view to_string(ErrorKind kind);

/// The single exception type of the library; `kind()` identifies the
/// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace mfh
