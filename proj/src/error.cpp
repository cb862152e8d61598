#include "csvx/error.hpp"

namespace csvx {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ThresholdUndefined: return "ThresholdUndefined";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::DegenerateBranch: return "DegenerateBranch";
    case ErrorCode::BelowThreshold: return "BelowThreshold";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::SingularLinearization: return "SingularLinearization";
    case ErrorCode::StalledOnBoundary: return "StalledOnBoundary";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace csvx
