#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace feedbalance {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (negative weight, bad parameter,
/// dimension mismatch, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An iterative method ran out of iterations or broke down.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual,
                   long iterations)
      : Error(what), best_residual_(best_residual), iterations_(iterations) {}

  double best_residual() const noexcept { return best_residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  long iterations_;
};

/// A reduction measure is undefined for the given input (zero denominator).
class UndefinedMeasureError : public Error {
 public:
  using Error::Error;
};

}  // namespace feedbalance
