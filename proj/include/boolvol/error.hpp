#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace boolvol {

enum class ErrorCode {
  InvalidSpec,
  InvalidArgument,
  ArityMismatch,
  IndexOutOfRange,
  ArityTooLarge,
  NotPowerOfTwo,
  DepthTooLarge,
  PrecisionExhausted,
  UnreachableTarget,
  InstanceTooLarge,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace boolvol
