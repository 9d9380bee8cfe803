#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace modcom {

// Machine-readable failure reasons. The CLI reports these verbatim.
enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NotAnticommuting,
  NotPositive,
  NotNormalized,
  NotHermitian,
  SingularDensity,
  NonChainStructure,
  UnsupportedSymbolic,
  TooLarge,
  EpsilonSensitive,
  UndefinedGeometry,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotAnticommuting: return "NotAnticommuting";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::SingularDensity: return "SingularDensity";
    case ErrorCode::NonChainStructure: return "NonChainStructure";
    case ErrorCode::UnsupportedSymbolic: return "UnsupportedSymbolic";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EpsilonSensitive: return "EpsilonSensitive";
    case ErrorCode::UndefinedGeometry: return "UndefinedGeometry";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for failures of the computation itself, as opposed to bad input.
  bool is_computational() const noexcept {
    return code_ != ErrorCode::InvalidArgument && code_ != ErrorCode::ParseError;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace modcom
