#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rgas {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument sits on a pole (s = 1 for zeta, non-positive integers for gamma).
class PoleError : public Error {
public:
  using Error::Error;
};

/// Argument outside the domain of the operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Requested accuracy not reachable within the evaluation budget.
class AccuracyError : public Error {
public:
  using Error::Error;
};

/// Logarithmic derivative requested at a zero of zeta.
class ZeroOfZetaError : public Error {
public:
  using Error::Error;
};

/// beta * omega <= 1 for some copy of a discrete ensemble.
class HagedornError : public Error {
public:
  using Error::Error;
};

class QuadratureError : public Error {
public:
  using Error::Error;
};

/// Zero search could not account for every zero the counting audit expects.
class MissedZeroError : public Error {
public:
  using Error::Error;
};

/// Zero sum cannot meet the requested tolerance with the available zeros.
class InsufficientZerosError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed input file; carries the offending 1-based line number.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace rgas
