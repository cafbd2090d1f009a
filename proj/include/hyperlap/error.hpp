#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hyperlap {

enum class ErrorKind {
  Parse,
  Validation,
  Domain,
  Capacity,
  Convergence,
  StochasticFailure,
  Divergence,
  Precondition,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(ErrorKind::Capacity, what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(ErrorKind::Convergence, what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class StochasticFailure : public Error {
 public:
  StochasticFailure(const std::string& what, int rounds)
      : Error(ErrorKind::StochasticFailure, what), rounds_(rounds) {}
  int rounds() const { return rounds_; }

 private:
  int rounds_;
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(long step)
      : Error(ErrorKind::Divergence, "non-finite state at step " + std::to_string(step)), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace hyperlap
