#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfaccel {

enum class ErrorCode {
  InvalidArgument,
  NonSymmetric,
  NegativeDiagonal,
  SingularSystem,
  BandwidthViolation,
  NonFiniteState,
  BadGrid,
  ArithmeticDegenerate,
  UnsupportedOrder,
  IndivisibleGrid,
  GridMismatch,
  EmptySelection,
  IllConditioned,
  OutOfDomain,
  UnknownProblem,
  UnknownScheme,
  FileFormat,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures that come from the numerics (as opposed to bad input
/// or configuration). The CLI maps these to a distinct exit status.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mfaccel
