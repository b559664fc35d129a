#pragma once

#include <stdexcept>
#include <string>

namespace catamp {

enum class ErrorCode {
  InvalidArgument,
  Sizing,
  DegenerateState,
  UndefinedCatTime,
  NegativeCatTime,
  DimensionMismatch,
  Numerical,
};

/// Every failure raised by the core library. The C API maps `code()` onto
/// `catamp_status`.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace catamp
