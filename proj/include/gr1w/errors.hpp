#pragma once

#include <stdexcept>
#include <string>

namespace gr1w {

/// Base class for all errors raised by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` and `column` are 1-based; 0 means unknown.
struct parse_error : error {
  parse_error(const std::string& msg, int line_ = 0, int column_ = 0)
      : error(msg), line(line_), column(column_) {}
  int line;
  int column;
};

/// An identifier was used in an expression without being declared.
struct undeclared_variable : parse_error {
  undeclared_variable(const std::string& name_, int line_ = 0, int column_ = 0)
      : parse_error("undeclared variable '" + name_ + "'", line_, column_), name(name_) {}
  std::string name;
};

/// A caller violated a documented precondition.
struct contract_error : error {
  using error::error;
};

/// The variable budget (or the hard engine limit) was exceeded.
struct cap_exceeded : error {
  using error::error;
};

/// Two objects that must share one variable table do not.
struct table_mismatch : error {
  using error::error;
};

/// Power iteration failed to reach the requested tolerance.
struct convergence_error : error {
  convergence_error(const std::string& msg, double residual_)
      : error(msg), residual(residual_) {}
  double residual;
};

}  // namespace gr1w
