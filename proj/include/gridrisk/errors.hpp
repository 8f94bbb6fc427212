#pragma once

#include <stdexcept>
#include <string>

namespace gridrisk {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (bad JSON, unreadable structure). Carries a
/// human-readable location when one is known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(message) {}
  ParseError(const std::string& message, int line, int column)
      : Error(message + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

/// Structurally sound document that violates a catalog invariant
/// (range, duplicate id, dangling reference, schema_version mismatch).
/// The message names the offending entity.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A score or triple component outside the 0..10 scale.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A mitigation plan references an id absent from the catalog.
class UnknownMitigationError : public Error {
 public:
  using Error::Error;
};

/// A failure scenario references a node absent from the dependency graph
/// (or one that is not a failable source).
class UnknownNodeError : public Error {
 public:
  using Error::Error;
};

/// The dependency graph has a cycle along the commodity-flow direction.
class CycleError : public Error {
 public:
  using Error::Error;
};

}  // namespace gridrisk
