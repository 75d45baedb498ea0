#pragma once

#include <stdexcept>
#include <string>

namespace dioph {

// Every failure raised by the library derives from Error. The exit code is
// what the command-line front end returns when the error escapes a pipeline.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, int exit_code = 1)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// A digit source emitted a partial quotient < 1, or a descriptor string did
/// not parse.
class MalformedDescriptor : public Error {
 public:
  explicit MalformedDescriptor(const std::string& what) : Error(what, 4) {}
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what, 4) {}
};

/// Precision refinement hit its cap without separating a value from a
/// threshold. Only a broken descriptor should trigger this.
class Undecided : public Error {
 public:
  explicit Undecided(const std::string& what) : Error(what, 3) {}
};

/// A property that the construction guarantees did not hold. Signals a
/// parameter or implementation bug, never a legitimate outcome.
class SoundnessError : public Error {
 public:
  explicit SoundnessError(const std::string& what) : Error(what, 3) {}
};

class RefinementFailure : public Error {
 public:
  explicit RefinementFailure(const std::string& what) : Error(what, 3) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, 4) {}
};

class VerificationFailure : public Error {
 public:
  explicit VerificationFailure(const std::string& what) : Error(what, 2) {}
};

/// A manifest points at an artifact that is missing or unreadable.
class ReportError : public Error {
 public:
  explicit ReportError(const std::string& what) : Error(what, 4) {}
};

}  // namespace dioph
