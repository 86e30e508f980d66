#include "mixcomp/error.hpp"

namespace mixcomp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotSorted: return "NotSorted";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::DegenerateStats: return "DegenerateStats";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::BadDelta: return "BadDelta";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::BadDesign: return "BadDesign";
    case ErrorCode::TooManyPartitions: return "TooManyPartitions";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

}  // namespace mixcomp
