#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odpca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (sizes, ranges, orderings).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Columns handed to orthonormalize() are numerically dependent.
class RankError : public Error {
 public:
  using Error::Error;
};

/// The Jacobi eigensolver hit its sweep cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double off_diagonal_residual)
      : Error(what), residual_(off_diagonal_residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The eigengap at the requested rank is not positive.
class IdentifiabilityError : public Error {
 public:
  using Error::Error;
};

/// An OdpcaState was stepped past its horizon or finalized too early.
class StateError : public Error {
 public:
  using Error::Error;
};

/// A downstream task has a zero baseline and no meaningful ratio.
class DegenerateTaskError : public Error {
 public:
  using Error::Error;
};

/// Dataset ingestion failed (missing file, not enough rows, memory cap).
class IngestionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IngestionError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IngestionError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace odpca
