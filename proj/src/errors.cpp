#include "fraclab/errors.hpp"

namespace fraclab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::WallTooClose: return "WallTooClose";
    case ErrorCode::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::RegionOutOfRange: return "RegionOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnsupportedFilling: return "UnsupportedFilling";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::WindowTouchesWall: return "WindowTouchesWall";
    case ErrorCode::AmbiguousAsymptotics: return "AmbiguousAsymptotics";
    case ErrorCode::NonNormalizable: return "NonNormalizable";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ScaleMismatch: return "ScaleMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::GridTooCoarse:
      return ErrorCategory::Numerical;
    case ErrorCode::SymmetryViolation:
    case ErrorCode::IndexMismatch:
      return ErrorCategory::Invariant;
    default:
      return ErrorCategory::Config;
  }
}

}  // namespace fraclab
