#pragma once

// Small arithmetic expression language over a single real variable.
//
// Grammar (standard precedence, `^` right-associative and binding tighter than
// unary minus):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// Calls: exp, log, sinh, cosh, tanh, sqrt, pow, abs. The constant `pi` is
// predefined. Expressions are immutable and share structure.

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

#include "mpak/core/error.hpp"

namespace mpak::expr {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

enum class Op : std::uint8_t { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn : std::uint8_t { Exp, Log, Sinh, Cosh, Tanh, Sqrt, Abs, Sign };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Number;
  Fn fn = Fn::Exp;
  double number = 0.0;
  NodePtr lhs;
  NodePtr rhs;
};

/// Signed magnitude in log space: value = sign * exp(log_abs). Lets warping
/// functions such as exp(r^3) or sinh(r) be evaluated far beyond the range of
/// a double.
struct LogValue {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  static LogValue from(double x);
  double value() const;
  bool is_zero() const { return sign == 0; }
};

LogValue operator*(LogValue a, LogValue b);
LogValue operator/(LogValue a, LogValue b);
LogValue operator+(LogValue a, LogValue b);
LogValue operator-(LogValue a);

class Expr {
 public:
  /// The constant zero in variable `r`.
  Expr();
  Expr(NodePtr root, std::string variable);

  static Expr constant(double value, std::string variable = "r");
  static Expr var(std::string variable = "r");

  double operator()(double x) const;
  LogValue eval_log(double x) const;

  /// d/d(variable), simplified.
  Expr derivative() const;
  Expr simplified() const;

  /// True iff the expression does not mention its variable.
  bool is_constant() const;
  /// Renders with minimal parentheses; parse(str()) reproduces the tree.
  std::string str() const;

  const std::string& variable() const noexcept { return variable_; }
  const NodePtr& root() const noexcept { return root_; }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, const Expr& b);
  friend Expr call(Fn fn, const Expr& a);

 private:
  NodePtr root_;
  std::string variable_;
};

/// Parses `src` with `variable` as the only free identifier.
/// Throws ParseError with 1-based line/column on malformed input.
Expr parse(std::string_view src, std::string_view variable = "r");

std::string_view fn_name(Fn fn);

}  // namespace mpak::expr
