#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liftdd {

// Base for every error raised by the workbench. The CLI maps these to exit
// code 2; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// The original input does not fail under the oracle, so there is nothing to
// minimize.
class NotFailureInducing : public Error {
 public:
  using Error::Error;
};

// A reduction returned an input that no longer fails. Always a hard failure.
class SoundnessViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace liftdd
