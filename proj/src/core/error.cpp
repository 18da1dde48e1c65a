#include "boolvol/error.hpp"

namespace boolvol {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ArityTooLarge: return "ArityTooLarge";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::UnreachableTarget: return "UnreachableTarget";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace boolvol
