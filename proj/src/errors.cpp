#include "bedmorph/errors.hpp"

namespace bedmorph {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::InsufficientSnapshots: return "InsufficientSnapshots";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ZeroEigenvalue: return "ZeroEigenvalue";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::CorruptPayload: return "CorruptPayload";
    case ErrorCode::InputNotFound: return "InputNotFound";
    case ErrorCode::TransectOutOfRange: return "TransectOutOfRange";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::ExcludedMode: return "ExcludedMode";
    case ErrorCode::BoundaryTimeIndex: return "BoundaryTimeIndex";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::NoContributingModes: return "NoContributingModes";
    case ErrorCode::AllExcluded: return "AllExcluded";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DegenerateSamples: return "DegenerateSamples";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
  }
  return "Unknown";
}

}  // namespace bedmorph
