#pragma once

#include <stdexcept>
#include <string>

namespace predprey {

/// Shape or dimension mismatch between cooperating objects.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Caller supplied a value outside the accepted domain (bad action, NaN input).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation called while its precondition on object state does not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid or unsatisfiable configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite loss, gradient, or parameter.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File missing, unreadable, truncated or corrupted.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace predprey
