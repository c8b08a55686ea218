#pragma once

#include <stdexcept>
#include <string>

namespace sperner {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments, malformed input, violated preconditions.  CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// An explicit size/complexity guard tripped.  Guards are flags with safe
// defaults and are never raised silently.  CLI exit code 3.
struct GuardError : Error {
  using Error::Error;
};

// A rejection-sampling stage exhausted its retry budget.  Carries the name of
// the acceptance condition that kept failing.  CLI exit code 4.
struct RetryError : Error {
  RetryError(const std::string& what, std::string condition)
      : Error(what), failed_condition(std::move(condition)) {}
  std::string failed_condition;
};

}  // namespace sperner
