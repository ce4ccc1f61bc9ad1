#include "cipher_autopsy/error.hpp"

namespace cipher_autopsy {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::ZeroInverse: return "ZeroInverse";
  case ErrorCode::Underdetermined: return "Underdetermined";
  case ErrorCode::Inconsistent: return "Inconsistent";
  case ErrorCode::InvalidCurve: return "InvalidCurve";
  case ErrorCode::PointNotOnCurve: return "PointNotOnCurve";
  case ErrorCode::DegenerateSharedPoint: return "DegenerateSharedPoint";
  case ErrorCode::DegenerateDerivedPoint: return "DegenerateDerivedPoint";
  case ErrorCode::BadDimensions: return "BadDimensions";
  case ErrorCode::EmptyImage: return "EmptyImage";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::MalformedHeader: return "MalformedHeader";
  case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
  case ErrorCode::TruncatedData: return "TruncatedData";
  case ErrorCode::BadCellSize: return "BadCellSize";
  case ErrorCode::BadKey: return "BadKey";
  case ErrorCode::BadMask: return "BadMask";
  case ErrorCode::NotFound: return "NotFound";
  case ErrorCode::SearchTooLarge: return "SearchTooLarge";
  case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

} // namespace cipher_autopsy
