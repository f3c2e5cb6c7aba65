#pragma once

#include <stdexcept>
#include <string>

namespace pblab {

/// Invalid argument to a constructor or operation (negative size, zero mass).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation (non-finite x).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quadrature or summation cannot reach the requested accuracy.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator application would read past the stored guard band.
class GuardBudgetError : public std::runtime_error {
 public:
  GuardBudgetError(int required, int available)
      : std::runtime_error("guard budget exceeded: operator word needs " + std::to_string(required) +
                           " guard indices, grid has " + std::to_string(available)),
        required_(required),
        available_(available) {}
  int required() const { return required_; }
  int available() const { return available_; }

 private:
  int required_;
  int available_;
};

/// Classical parameters violate a constraint of the gain-loss model.
class ConstraintError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pblab
