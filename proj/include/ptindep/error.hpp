#pragma once

#include <stdexcept>
#include <string>

namespace ptindep {

enum class ErrorKind {
  InvalidArgument,
  DuplicateTime,
  OutOfWindow,
  DegenerateSample,
  TooFewTrials,
  NonpositiveVariance,
  RankOutOfRange,
  TooLarge,
  NotImplemented,
  ParseError,
};

const char* to_string(ErrorKind kind) noexcept;

/** Library-wide exception carrying a machine-checkable kind. */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ptindep
