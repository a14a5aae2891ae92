#pragma once

#include <stdexcept>
#include <string>

namespace sphase {

/// Failure categories surfaced by the library. The CLI maps them onto exit codes.
enum class ErrorCode {
  MismatchedBasePoint,
  IndeterminateOrder,
  TruncationInsufficient,
  ZeroGerm,
  OutOfSector,
  NotInvertible,
  NoConvergence,
  InadmissibleGerm,
  WrongSector,
  NonGenericDirection,
  InvalidData,
  SyntaxError,
  DenominatorMismatch,
  IoError,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MismatchedBasePoint: return "MismatchedBasePoint";
    case ErrorCode::IndeterminateOrder: return "IndeterminateOrder";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::ZeroGerm: return "ZeroGerm";
    case ErrorCode::OutOfSector: return "OutOfSector";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InadmissibleGerm: return "InadmissibleGerm";
    case ErrorCode::WrongSector: return "WrongSector";
    case ErrorCode::NonGenericDirection: return "NonGenericDirection";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DenominatorMismatch: return "DenominatorMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_{code} {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sphase
