#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eddy {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain (negative rate, λ ∉ [0,1], ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The requested operation does not apply to this flow kind.
class UnsupportedFlowError : public Error {
 public:
  using Error::Error;
};

/// A sampling interval is not an integer multiple of the stored step.
class CommensurabilityError : public Error {
 public:
  using Error::Error;
};

/// Too few samples for the requested estimator.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures: integration blow-up, non-converged linear solves.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BlowupError : public NumericalError {
 public:
  BlowupError(std::size_t step, const std::string& what)
      : NumericalError("integration blow-up at step " + std::to_string(step) + ": " + what),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(double residual, const std::string& what)
      : NumericalError(what + " (relative residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Malformed configuration file or command-line value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace eddy
