#include "ptindep/error.hpp"

namespace ptindep {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DuplicateTime: return "DuplicateTime";
    case ErrorKind::OutOfWindow: return "OutOfWindow";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::TooFewTrials: return "TooFewTrials";
    case ErrorKind::NonpositiveVariance: return "NonpositiveVariance";
    case ErrorKind::RankOutOfRange: return "RankOutOfRange";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotImplemented: return "NotImplemented";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace ptindep
