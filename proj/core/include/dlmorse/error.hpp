#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dlmorse {

enum class ErrorCode {
  InvalidArgument = 1,
  NonFinite,
  OutOfDomain,
  BracketFailure,
  UndefinedOnOrigin,
  Indeterminate,
  StepSize,
  HistoryUnderrun,
  BlowUp,
  ContourFailure,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception carrying a stable code so callers (the CLI in
/// particular) can map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace dlmorse
