#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace matcat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AxiomViolation : public Error {
 public:
  using Error::Error;
};

class NotCircuitHyperplane : public Error {
 public:
  using Error::Error;
};

class RankZero : public Error {
 public:
  using Error::Error;
};

class InvalidCut : public Error {
 public:
  using Error::Error;
};

class EmptyGroundSet : public Error {
 public:
  using Error::Error;
};

class NotIndependent : public Error {
 public:
  using Error::Error;
};

/// Raised by any search that exceeds its configured node or time budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ChecksumMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownColumn : public Error {
 public:
  using Error::Error;
};

class TypeMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t column, const std::string& what)
      : Error("column " + std::to_string(column) + ": " + what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace matcat
