#include "mfaccel/error.hpp"

namespace mfaccel {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NegativeDiagonal: return "NegativeDiagonal";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::BandwidthViolation: return "BandwidthViolation";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::ArithmeticDegenerate: return "ArithmeticDegenerate";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::IndivisibleGrid: return "IndivisibleGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::UnknownProblem: return "UnknownProblem";
    case ErrorCode::UnknownScheme: return "UnknownScheme";
    case ErrorCode::FileFormat: return "FileFormat";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NegativeDiagonal:
    case ErrorCode::SingularSystem:
    case ErrorCode::NonFiniteState:
    case ErrorCode::ArithmeticDegenerate:
    case ErrorCode::EmptySelection:
    case ErrorCode::IllConditioned:
      return true;
    default:
      return false;
  }
}

}  // namespace mfaccel
