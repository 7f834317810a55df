#pragma once

#include <stdexcept>
#include <string>

namespace varseq {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that does not fit the chart: unknown variables, bad indices,
/// mismatched contexts or orders.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Text that does not parse. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A precondition of a variational operation failed (e.g. a source form that
/// is not locally variational, a Lagrangian change that is not a divergence).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An identity that must hold by construction did not. Signals a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace varseq
