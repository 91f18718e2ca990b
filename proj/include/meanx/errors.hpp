#pragma once

#include <stdexcept>
#include <string>

namespace meanx {

enum class ErrorKind {
  Domain,       // value outside the mean's domain (nonpositive scalar, non-SPD matrix, bad parameter)
  Dimension,    // arity or shape mismatch
  Parse,        // malformed input text or config
  Convergence,  // iteration exhausted max_iter above tolerance
  Numeric,      // internal numerical failure (eigensolver cap, f undefined at an eigenvalue)
  Io,           // file could not be opened / written
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(std::string msg) : Error(ErrorKind::Domain, std::move(msg)) {}
};

struct DimensionError : Error {
  explicit DimensionError(std::string msg) : Error(ErrorKind::Dimension, std::move(msg)) {}
};

struct ParseError : Error {
  explicit ParseError(std::string msg) : Error(ErrorKind::Parse, std::move(msg)) {}
};

struct NumericError : Error {
  explicit NumericError(std::string msg) : Error(ErrorKind::Numeric, std::move(msg)) {}
};

struct IoError : Error {
  explicit IoError(std::string msg) : Error(ErrorKind::Io, std::move(msg)) {}
};

// Carries the state of a stalled iteration so callers can report how far it got.
class ConvergenceError : public Error {
 public:
  ConvergenceError(std::string msg, int iterations, double last_gap)
      : Error(ErrorKind::Convergence, std::move(msg)), iterations_(iterations), last_gap_(last_gap) {}
  int iterations() const noexcept { return iterations_; }
  double last_gap() const noexcept { return last_gap_; }

 private:
  int iterations_;
  double last_gap_;
};

}  // namespace meanx
