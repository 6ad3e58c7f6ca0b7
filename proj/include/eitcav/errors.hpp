#pragma once

#include <stdexcept>
#include <string>

namespace eitcav {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration could not be parsed or failed validation.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A caller broke an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A closed form hit a pole (vanishing denominator) for the given inputs.
class SingularInputError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No transparency window could be bracketed around two-photon resonance.
class NoTransparencyWindowError : public Error {
 public:
  using Error::Error;
};

/// Two independent routes disagreed beyond tolerance.
class CrossCheckError : public Error {
 public:
  using Error::Error;
};

/// The integrator could not make progress (step-size underflow).
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& msg, double spectral_radius)
      : Error(msg), spectral_radius_(spectral_radius) {}
  /// Estimate of the fastest local eigenvalue magnitude, rad/us.
  double spectral_radius() const { return spectral_radius_; }

 private:
  double spectral_radius_;
};

/// An iterative procedure ran out of budget before reaching its tolerance.
class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& msg, double residual) : Error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace eitcav
