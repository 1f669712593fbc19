#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratpow {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation too close to a pole or zero to be trusted.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that fails numerical validation.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical identity the library relies on was violated.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Requested size exceeds the configured memory budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ratpow
