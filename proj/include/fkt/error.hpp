#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fkt {

enum class ErrorCode {
  EmptyFactorList,
  NonNormalizedTrace,
  InvalidArgument,
  ShapeMismatch,
  NotAProjection,
  NotSelfAdjoint,
  NotPositive,
  Singular,
  PathNotAtIdentity,
  SingularSample,
  AlgebraMismatch,
  NotInvertible,
  DimensionMismatch,
  NotExact,
  SingularGenerator,
  MalformedWord,
  GeneratorCountMismatch,
  InconsistentHolonomy,
  DegreeOutOfRange,
  NonpositiveTime,
  ShiftedSpectrumNonpositive,
  MissingDerivative,
  StepTooLarge,
  BettiNumberChanged,
  ZeroTorsion,
  DomainError,
  QuadratureNotConverged,
  NotConverged,
  NotAntisymmetric,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures of an iterative numerical method (as opposed to bad input).
  bool is_convergence_failure() const noexcept {
    return code_ == ErrorCode::NotConverged || code_ == ErrorCode::QuadratureNotConverged;
  }

 private:
  ErrorCode code_;
};

}  // namespace fkt
