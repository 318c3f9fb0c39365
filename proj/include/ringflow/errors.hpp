#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace ringflow {

enum class ErrorKind {
  InvalidArgument,
  ZeroVector,
  InvalidValue,
  ParseError,
  InvalidState,
  DegenerateOperator,
  InvalidGrid,
  MemoryCap,
  ConvergenceFailure,
  DimensionMismatch,
  StrideTooLarge,
  DegenerateSeries,
  InsufficientRange,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Thrown by the eigensolver when the iteration cap is hit. Carries the best
/// iterate so callers can inspect or restart from it.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double eigenvalue, Eigen::VectorXd vector,
                     double residual, int iterations)
      : Error(ErrorKind::ConvergenceFailure, what),
        eigenvalue_(eigenvalue),
        vector_(std::move(vector)),
        residual_(residual),
        iterations_(iterations) {}

  double eigenvalue() const noexcept { return eigenvalue_; }
  const Eigen::VectorXd& vector() const noexcept { return vector_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double eigenvalue_;
  Eigen::VectorXd vector_;
  double residual_;
  int iterations_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::DegenerateOperator: return "DegenerateOperator";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::MemoryCap: return "MemoryCap";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::StrideTooLarge: return "StrideTooLarge";
    case ErrorKind::DegenerateSeries: return "DegenerateSeries";
    case ErrorKind::InsufficientRange: return "InsufficientRange";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ringflow
