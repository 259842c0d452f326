#pragma once

#include <stdexcept>
#include <string>

namespace bredonk {

// Each failure class maps to one CLI exit code.
enum class ErrorKind {
  schema = 2,
  group_closure = 3,
  non_cellular = 4,
  invariant_violation = 5,
  unsupported_dimension = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& w) : Error(ErrorKind::schema, w) {}
};

class GroupClosureError : public Error {
 public:
  explicit GroupClosureError(const std::string& w)
      : Error(ErrorKind::group_closure, w) {}
};

class NonCellularError : public Error {
 public:
  explicit NonCellularError(const std::string& w)
      : Error(ErrorKind::non_cellular, w) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& w)
      : Error(ErrorKind::invariant_violation, w) {}
};

class UnsupportedDimension : public Error {
 public:
  explicit UnsupportedDimension(const std::string& w)
      : Error(ErrorKind::unsupported_dimension, w) {}
};

}  // namespace bredonk
