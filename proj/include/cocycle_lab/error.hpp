#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cocycle_lab {

enum class ErrorCode {
  PreconditionViolated,
  InvalidConfig,
  NoPseudoorbit,
  NotFound,
  SingularMatrix,
  NotInvariant,
  NotOnStableSet,
  NotOnUnstableSet,
  NotHomoclinic,
  Diverging,
  TooLarge,
  NotBunched,
  NotConverged,
  NotRotationFixedPoint,
  Empty,
  DimensionMismatch,
  Degenerate,
  Unsupported,
};

std::string_view error_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the CLI
// maps them onto exit statuses and prints error_name() in its diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  /// The message without the error-name prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NoPseudoorbit: return "NoPseudoorbit";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NotOnStableSet: return "NotOnStableSet";
    case ErrorCode::NotOnUnstableSet: return "NotOnUnstableSet";
    case ErrorCode::NotHomoclinic: return "NotHomoclinic";
    case ErrorCode::Diverging: return "Diverging";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotBunched: return "NotBunched";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NotRotationFixedPoint: return "NotRotationFixedPoint";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace cocycle_lab
