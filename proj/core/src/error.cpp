#include "dlmorse/error.hpp"

namespace dlmorse {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::NonFinite: return "non-finite";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::BracketFailure: return "bracket-failure";
    case ErrorCode::UndefinedOnOrigin: return "undefined-on-origin";
    case ErrorCode::Indeterminate: return "indeterminate";
    case ErrorCode::StepSize: return "step-size";
    case ErrorCode::HistoryUnderrun: return "history-underrun";
    case ErrorCode::BlowUp: return "blow-up";
    case ErrorCode::ContourFailure: return "contour-failure";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace dlmorse
