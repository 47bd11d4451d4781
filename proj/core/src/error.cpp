#include "ascifit/error.hpp"

namespace ascifit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SigmaZero: return "SigmaZero";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadEta: return "BadEta";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ascifit
