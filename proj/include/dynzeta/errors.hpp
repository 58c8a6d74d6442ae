#pragma once

#include <stdexcept>
#include <string>

namespace dynzeta {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An identity that must hold by construction failed; signals a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double achieved)
      : NumericalError(what), achieved_bound(achieved) {}
  double achieved_bound;
};

class SingularDeterminantError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Winding or branch mismatch between two sides of a branch-sensitive identity.
class BranchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  int line;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::string id)
      : std::runtime_error(id.empty() ? what : "record '" + id + "': " + what),
        record_id(std::move(id)) {}
  std::string record_id;
};

}  // namespace dynzeta
