#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace docstat {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (JSON, CSV, filename layout).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that breaks a documented invariant. `row()` is the
// offending 1-based catalog row, or 0 when the violation is not row-specific.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::size_t row = 0)
      : Error(what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A parser executable could not be resolved before a corpus run.
class MissingExecutableError : public Error {
 public:
  MissingExecutableError(const std::string& parser, const std::string& command)
      : Error("parser '" + parser + "': executable not found: " + command),
        parser_(parser) {}

  const std::string& parser() const noexcept { return parser_; }

 private:
  std::string parser_;
};

}  // namespace docstat
