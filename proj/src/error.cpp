#include "fkt/error.hpp"

namespace fkt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyFactorList: return "EmptyFactorList";
    case ErrorCode::NonNormalizedTrace: return "NonNormalizedTrace";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotAProjection: return "NotAProjection";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::PathNotAtIdentity: return "PathNotAtIdentity";
    case ErrorCode::SingularSample: return "SingularSample";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::SingularGenerator: return "SingularGenerator";
    case ErrorCode::MalformedWord: return "MalformedWord";
    case ErrorCode::GeneratorCountMismatch: return "GeneratorCountMismatch";
    case ErrorCode::InconsistentHolonomy: return "InconsistentHolonomy";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::NonpositiveTime: return "NonpositiveTime";
    case ErrorCode::ShiftedSpectrumNonpositive: return "ShiftedSpectrumNonpositive";
    case ErrorCode::MissingDerivative: return "MissingDerivative";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::BettiNumberChanged: return "BettiNumberChanged";
    case ErrorCode::ZeroTorsion: return "ZeroTorsion";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace fkt
