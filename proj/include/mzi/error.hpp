#pragma once

#include <stdexcept>
#include <string>

namespace mzi {

enum class ErrorCode {
  InvalidArgument = 1,
  SolverFailure,
  IntegrationFailure,
  UndefinedCorrelation,
  UnsupportedRegime,
  InvalidStep,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception thrown by every fallible operation in the core library.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

} // namespace mzi
