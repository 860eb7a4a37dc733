#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tperm {

using Complex = std::complex<double>;

enum class ErrorCode {
  kInvalidArgument,
  kLengthMismatch,
  kNonFinite,
  kOutOfRange,
  kStorageCapExceeded,
  kBudgetExceeded,
  kZeroMean,
  kIo,
  kParse,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kLengthMismatch: return "length_mismatch";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kStorageCapExceeded: return "storage_cap_exceeded";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kZeroMean: return "zero_mean";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to a machine-readable error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tperm
