#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmbarrier {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value outside its documented domain (zero dimension, bad theta, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A size that would overflow or exceed a configured limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed text document. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& field, const std::string& what)
      : Error("line " + std::to_string(line) + " (" + field + "): " + what),
        line_(line),
        field_(field) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// A permutation action that is not a bijection or does not preserve the support.
class InvalidAction : public Error {
 public:
  using Error::Error;
};

/// The entropy solver hit its iteration cap before meeting the stopping rule.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double best_value_bits, double gap_bits)
      : Error(what), best_value_bits_(best_value_bits), gap_bits_(gap_bits) {}

  double best_value_bits() const { return best_value_bits_; }
  double gap_bits() const { return gap_bits_; }

 private:
  double best_value_bits_;
  double gap_bits_;
};

}  // namespace mmbarrier
