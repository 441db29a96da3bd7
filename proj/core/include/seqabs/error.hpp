#pragma once

#include <stdexcept>
#include <string>

namespace seqabs {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected argument: shape mismatch, out-of-range index, violated precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// API misuse, e.g. reusing a consumed gradient tape.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values produced by a computation (overflow, divergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent file contents.
class FormatError : public Error {
 public:
  enum class Kind {
    Malformed,
    UnsupportedVersion,
    InconsistentDim,
    UnknownLabel,
    EmptyDataset,
  };

  FormatError(Kind kind, std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  /// 1-based line of the first offending record, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

}  // namespace seqabs
