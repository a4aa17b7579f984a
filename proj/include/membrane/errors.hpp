#pragma once

#include <stdexcept>
#include <string>

namespace membrane {

// A computation ran but did not produce a trustworthy result (no root
// bracket, solver non-convergence, cross-check mismatch). Argument and
// precondition violations use std::invalid_argument / std::domain_error.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace membrane

namespace membrane {

// Malformed input file. `line` is 1-based; 0 when the problem is not tied to
// a single line (for instance a truncated file).
class ParseError : public std::invalid_argument {
 public:
  ParseError(int line, const std::string& reason)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + reason : reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace membrane
