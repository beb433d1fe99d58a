#include "utm/error.hpp"

namespace utm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IncompatibleData: return "IncompatibleData";
    case ErrorCode::BadHorizon: return "BadHorizon";
    case ErrorCode::BadNonlinearity: return "BadNonlinearity";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::BadTruncation: return "BadTruncation";
    case ErrorCode::DivergentKernel: return "DivergentKernel";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::TailTooFat: return "TailTooFat";
    case ErrorCode::InsufficientResolution: return "InsufficientResolution";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace utm
