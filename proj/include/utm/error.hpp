#pragma once

#include <stdexcept>
#include <string>

namespace utm {

enum class ErrorCode {
  OutOfRange,
  IncompatibleData,
  BadHorizon,
  BadNonlinearity,
  BadGrid,
  BadTruncation,
  DivergentKernel,
  OverflowGuard,
  TailTooFat,
  InsufficientResolution,
  InsufficientData,
  DomainMismatch,
  UnknownName,
  Config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace utm
