#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cipher_autopsy {

enum class ErrorCode {
  ZeroInverse,
  Underdetermined,
  Inconsistent,
  InvalidCurve,
  PointNotOnCurve,
  DegenerateSharedPoint,
  DegenerateDerivedPoint,
  BadDimensions,
  EmptyImage,
  DimensionMismatch,
  MalformedHeader,
  UnsupportedMaxval,
  TruncatedData,
  BadCellSize,
  BadKey,
  BadMask,
  NotFound,
  SearchTooLarge,
  Io,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// the CLI can map it to an exit status and a JSON error record.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace cipher_autopsy
