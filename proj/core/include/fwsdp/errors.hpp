#pragma once

#include <stdexcept>
#include <string>

namespace fwsdp {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (SDPA files, polynomial files, JSON payloads).
/// Carries the 1-based line number when one is known, 0 otherwise.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Numerical breakdown: eigensolver non-convergence, singular normal
/// equations, non-finite data. Distinct from mathematical outcomes such as
/// non-membership, which are reported through statuses, not exceptions.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace fwsdp
