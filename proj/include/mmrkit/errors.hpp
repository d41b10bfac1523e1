#pragma once

#include <stdexcept>
#include <string>

namespace mmrkit {

// Every failure raised by the library carries a taxonomy name so the CLI can
// report the category and map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(std::string taxonomy, const std::string& what)
      : std::runtime_error(what), taxonomy_(std::move(taxonomy)) {}
  const std::string& taxonomy() const noexcept { return taxonomy_; }

 private:
  std::string taxonomy_;
};

// Invalid scalar input or violated precondition.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

// Root bracket does not straddle a sign change.
class BracketError : public Error {
 public:
  explicit BracketError(const std::string& what) : Error("bracket_error", what) {}
};

// Iteration budget exhausted; carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_x, double best_f)
      : Error("convergence_error", what), best_x_(best_x), best_f_(best_f) {}
  double best_x() const noexcept { return best_x_; }
  double best_f() const noexcept { return best_f_; }

 private:
  double best_x_;
  double best_f_;
};

// Operation called outside the regime where it is defined (e.g. kstar in the
// threshold-optimal regime).
class RegimeError : public Error {
 public:
  explicit RegimeError(const std::string& what) : Error("regime_error", what) {}
};

// Malformed input file; line and column are 1-based (column 0 = whole line).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("parse_error", what), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that violates a data invariant; carries the offending row
// (file line number, 0 if not row-specific).
class ConstraintError : public Error {
 public:
  explicit ConstraintError(const std::string& what, int row = 0)
      : Error("constraint_error", what), row_(row) {}
  int row() const noexcept { return row_; }

 private:
  int row_;
};

// Required scalar parameter absent from both config file and CLI flags.
class MissingParameterError : public Error {
 public:
  explicit MissingParameterError(const std::string& what)
      : Error("missing_parameter", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

}  // namespace mmrkit
