#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace hpencil::coeffs {

// Arithmetic expressions in one variable `x`.
//
// Grammar (whitespace insignificant):
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | base ("^" factor)?
//   base   := number | "x" | "pi" | func "(" expr ")" | "(" expr ")"
//   func   := sin | cos | tan | exp | log | sqrt | abs | tanh
//
// "^" binds tighter than unary minus and is right-associative.

enum class UnaryFunc { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Tanh, Neg };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Number, Var, Pi, Unary, Binary };

  Kind kind;
  double value = 0.0;                 // Number
  UnaryFunc func = UnaryFunc::Neg;    // Unary
  BinaryOp op = BinaryOp::Add;        // Binary
  ExprPtr lhs;                        // Unary operand / Binary lhs
  ExprPtr rhs;                        // Binary rhs
};

/// Immutable expression handle. Copies are cheap and share the tree.
class Expr {
public:
  Expr() = default;
  explicit Expr(ExprPtr root) : root_(std::move(root)) {}

  const ExprPtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }

  /// Evaluate at x. Throws EvalError on domain violations and on overflow
  /// to a non-finite value.
  double eval(double x) const;

  /// Evaluate value and d/dx together (dual-number arithmetic).
  struct ValueAndDerivative {
    double value;
    double derivative;
  };
  ValueAndDerivative eval_with_derivative(double x) const;

  /// Canonical text form; parse(print()) is structurally equal to this.
  std::string to_string() const;

  bool structurally_equal(const Expr& other) const;

private:
  ExprPtr root_;
};

/// Parse `source` per the grammar above. Throws ParseError with position.
Expr parse_expr(std::string_view source);

// Node constructors, mostly for tests and programmatic building.
Expr make_number(double v);
Expr make_var();
Expr make_pi();
Expr make_unary(UnaryFunc f, Expr operand);
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);

}  // namespace hpencil::coeffs
