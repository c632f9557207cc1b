#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlsgs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent user configuration (maps to CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A function was called with arguments that break its stated contract.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Non-finite data where finite data is required.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (zero field, omega too small, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// omega (+ theta) does not exceed omega_0, so the quadratic form I*_omega is not positive.
class SpectralConditionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Base of numerical failures during iteration (maps to CLI exit code 3).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A single flow step could not be completed.
class StepFailure : public NumericalFailure {
 public:
  StepFailure(const std::string& what, std::size_t iteration)
      : NumericalFailure(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// The exact nonlinear sub-flow of the splitting scheme blows up within the step.
class BlowUpError : public StepFailure {
 public:
  BlowUpError(const std::string& what, std::size_t iteration, std::size_t node)
      : StepFailure(what + " at node " + std::to_string(node), iteration), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// An iterative method did not reach its tolerance; carries the best iterate.
class IterativeFailure : public NumericalFailure {
 public:
  IterativeFailure(const std::string& what, std::vector<double> best)
      : NumericalFailure(what), best_(std::move(best)) {}
  const std::vector<double>& best_iterate() const noexcept { return best_; }

 private:
  std::vector<double> best_;
};

/// Violated internal invariant that the analysis says cannot happen.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlsgs
