#pragma once

#include <stdexcept>
#include <string>

namespace wft {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state or curve parameter left the region where the model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation was not met by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to converge or lost its bracket.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// The junction entropy inequality failed beyond tolerance.
class EntropyViolation : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Invalid user configuration. `path` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// The front tracker exceeded its interaction budget.
class InteractionCapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace wft
