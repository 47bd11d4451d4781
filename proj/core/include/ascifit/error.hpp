#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ascifit {

enum class ErrorCode {
  NonFinite,
  SigmaZero,
  OutOfDomain,
  NoConvergence,
  EmptyInput,
  LengthMismatch,
  BadEta,
  TooLarge,
  InsufficientPoints,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Numerical failures (as opposed to bad input) map to CLI exit status 2.
constexpr bool is_numerical(ErrorCode code) noexcept {
  return code == ErrorCode::NoConvergence || code == ErrorCode::OutOfDomain;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ascifit
