#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coarsekit {

enum class ErrorCode {
  MismatchedParent,
  WindowTooSmall,
  Uncertified,
  EmptyBall,
  CertificateInvalid,
  InputInvalid,
  ScheduleUnderflow,
  ZeroDenominator,
  PreconditionFailed,
  Timeout,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// The single exception type thrown by the toolkit. Contract violations are
/// distinguished by code(); verification outcomes are never thrown, they are
/// returned as reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MismatchedParent: return "MismatchedParent";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::Uncertified: return "Uncertified";
    case ErrorCode::EmptyBall: return "EmptyBall";
    case ErrorCode::CertificateInvalid: return "CertificateInvalid";
    case ErrorCode::InputInvalid: return "InputInvalid";
    case ErrorCode::ScheduleUnderflow: return "ScheduleUnderflow";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace coarsekit
