#pragma once

#include <stdexcept>
#include <string>

namespace pba {

enum class ErrorCode {
  InvalidArgument,
  ZeroMatrix,
  GeometryMismatch,
  NotNormalized,
  EmptyData,
  BadP,
  NegativeInput,
  DimensionMismatch,
  TooSmall,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::BadP: return "BadP";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace pba
