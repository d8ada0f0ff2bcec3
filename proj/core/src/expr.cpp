#include "hpencil/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "hpencil/errors.hpp"

namespace hpencil::coeffs {

namespace {

ExprPtr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

struct FuncName {
  std::string_view name;
  UnaryFunc func;
};

constexpr std::array<FuncName, 8> kFuncs = {{
    {"sin", UnaryFunc::Sin},
    {"cos", UnaryFunc::Cos},
    {"tan", UnaryFunc::Tan},
    {"exp", UnaryFunc::Exp},
    {"log", UnaryFunc::Log},
    {"sqrt", UnaryFunc::Sqrt},
    {"abs", UnaryFunc::Abs},
    {"tanh", UnaryFunc::Tanh},
}};

const char* func_name(UnaryFunc f) {
  switch (f) {
    case UnaryFunc::Sin: return "sin";
    case UnaryFunc::Cos: return "cos";
    case UnaryFunc::Tan: return "tan";
    case UnaryFunc::Exp: return "exp";
    case UnaryFunc::Log: return "log";
    case UnaryFunc::Sqrt: return "sqrt";
    case UnaryFunc::Abs: return "abs";
    case UnaryFunc::Tanh: return "tanh";
    case UnaryFunc::Neg: return "-";
  }
  return "?";
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr run() {
    skip_ws();
    if (at_end()) throw ParseError("empty expression", 0);
    ExprPtr e = expr();
    skip_ws();
    if (!at_end()) fail("unexpected trailing input");
    return e;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = node({ExprNode::Kind::Binary, 0, UnaryFunc::Neg, BinaryOp::Add, lhs, term()});
      } else if (eat('-')) {
        lhs = node({ExprNode::Kind::Binary, 0, UnaryFunc::Neg, BinaryOp::Sub, lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (eat('*')) {
        lhs = node({ExprNode::Kind::Binary, 0, UnaryFunc::Neg, BinaryOp::Mul, lhs, factor()});
      } else if (eat('/')) {
        lhs = node({ExprNode::Kind::Binary, 0, UnaryFunc::Neg, BinaryOp::Div, lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  ExprPtr factor() {
    if (eat('-')) {
      return node({ExprNode::Kind::Unary, 0, UnaryFunc::Neg, BinaryOp::Add, factor(), nullptr});
    }
    ExprPtr b = base();
    if (eat('^')) {
      return node({ExprNode::Kind::Binary, 0, UnaryFunc::Neg, BinaryOp::Pow, b, factor()});
    }
    return b;
  }

  ExprPtr base() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return node({ExprNode::Kind::Number, number(), UnaryFunc::Neg, BinaryOp::Add, nullptr, nullptr});
    }
    if (c == '(') {
      ++pos_;
      ExprPtr inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      std::string name = identifier();
      if (name == "x") return node({ExprNode::Kind::Var, 0, UnaryFunc::Neg, BinaryOp::Add, nullptr, nullptr});
      if (name == "pi") return node({ExprNode::Kind::Pi, 0, UnaryFunc::Neg, BinaryOp::Add, nullptr, nullptr});
      for (const auto& f : kFuncs) {
        if (name == f.name) {
          if (!eat('(')) fail("expected '(' after '" + name + "'");
          ExprPtr arg = expr();
          if (!eat(')')) fail("expected ')'");
          return node({ExprNode::Kind::Unary, 0, f.func, BinaryOp::Add, arg, nullptr});
        }
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  // Decimal literal with optional fraction and exponent. No hex, no sign.
  double number() {
    std::size_t start = pos_;
    bool have_digits = false;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
      have_digits = true;
    }
    if (!at_end() && src_[pos_] == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        have_digits = true;
      }
    }
    if (!have_digits) fail("malformed number");
    if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (!at_end() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        pos_ = mark;  // "1e" is "1" followed by identifier "e": reject later
        fail("malformed exponent");
      }
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    std::string_view tok = src_.substr(start, pos_ - start);
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      pos_ = start;
      fail("malformed number");
    }
    return v;
  }
};

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
}

double eval_node(const ExprNode& n, double x) {
  switch (n.kind) {
    case ExprNode::Kind::Number: return n.value;
    case ExprNode::Kind::Var: return x;
    case ExprNode::Kind::Pi: return M_PI;
    case ExprNode::Kind::Unary: {
      double u = eval_node(*n.lhs, x);
      double r = 0;
      switch (n.func) {
        case UnaryFunc::Sin: r = std::sin(u); break;
        case UnaryFunc::Cos: r = std::cos(u); break;
        case UnaryFunc::Tan: r = std::tan(u); break;
        case UnaryFunc::Exp: r = std::exp(u); break;
        case UnaryFunc::Log:
          if (u <= 0) throw EvalError("log of non-positive value");
          r = std::log(u);
          break;
        case UnaryFunc::Sqrt:
          if (u < 0) throw EvalError("sqrt of negative value");
          r = std::sqrt(u);
          break;
        case UnaryFunc::Abs: r = std::abs(u); break;
        case UnaryFunc::Tanh: r = std::tanh(u); break;
        case UnaryFunc::Neg: r = -u; break;
      }
      check_finite(r, func_name(n.func));
      return r;
    }
    case ExprNode::Kind::Binary: {
      double a = eval_node(*n.lhs, x);
      double b = eval_node(*n.rhs, x);
      double r = 0;
      switch (n.op) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        case BinaryOp::Div:
          if (b == 0) throw EvalError("division by zero");
          r = a / b;
          break;
        case BinaryOp::Pow: r = std::pow(a, b); break;
      }
      check_finite(r, "binary operator");
      return r;
    }
  }
  throw EvalError("corrupt expression node");
}

struct Dual {
  double v;
  double d;
};

Dual eval_dual(const ExprNode& n, double x) {
  switch (n.kind) {
    case ExprNode::Kind::Number: return {n.value, 0};
    case ExprNode::Kind::Var: return {x, 1};
    case ExprNode::Kind::Pi: return {M_PI, 0};
    case ExprNode::Kind::Unary: {
      Dual u = eval_dual(*n.lhs, x);
      Dual r{0, 0};
      switch (n.func) {
        case UnaryFunc::Sin: r = {std::sin(u.v), std::cos(u.v) * u.d}; break;
        case UnaryFunc::Cos: r = {std::cos(u.v), -std::sin(u.v) * u.d}; break;
        case UnaryFunc::Tan: {
          double t = std::tan(u.v);
          r = {t, (1 + t * t) * u.d};
          break;
        }
        case UnaryFunc::Exp: {
          double e = std::exp(u.v);
          r = {e, e * u.d};
          break;
        }
        case UnaryFunc::Log:
          if (u.v <= 0) throw EvalError("log of non-positive value");
          r = {std::log(u.v), u.d / u.v};
          break;
        case UnaryFunc::Sqrt: {
          if (u.v < 0) throw EvalError("sqrt of negative value");
          double s = std::sqrt(u.v);
          r = {s, u.v == 0 ? 0 : u.d / (2 * s)};
          break;
        }
        case UnaryFunc::Abs:
          r = {std::abs(u.v), (u.v > 0 ? 1.0 : u.v < 0 ? -1.0 : 0.0) * u.d};
          break;
        case UnaryFunc::Tanh: {
          double t = std::tanh(u.v);
          r = {t, (1 - t * t) * u.d};
          break;
        }
        case UnaryFunc::Neg: r = {-u.v, -u.d}; break;
      }
      check_finite(r.v, func_name(n.func));
      return r;
    }
    case ExprNode::Kind::Binary: {
      Dual a = eval_dual(*n.lhs, x);
      Dual b = eval_dual(*n.rhs, x);
      Dual r{0, 0};
      switch (n.op) {
        case BinaryOp::Add: r = {a.v + b.v, a.d + b.d}; break;
        case BinaryOp::Sub: r = {a.v - b.v, a.d - b.d}; break;
        case BinaryOp::Mul: r = {a.v * b.v, a.d * b.v + a.v * b.d}; break;
        case BinaryOp::Div:
          if (b.v == 0) throw EvalError("division by zero");
          r = {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
          break;
        case BinaryOp::Pow: {
          double p = std::pow(a.v, b.v);
          // d(a^b) = a^b (b' log a + b a'/a); log a only enters when b varies.
          double dp = 0;
          if (b.d != 0) {
            if (a.v <= 0) throw EvalError("derivative of pow with non-positive base");
            dp = p * (b.d * std::log(a.v) + b.v * a.d / a.v);
          } else if (a.d != 0) {
            dp = b.v * std::pow(a.v, b.v - 1) * a.d;
          }
          r = {p, dp};
          break;
        }
      }
      check_finite(r.v, "binary operator");
      return r;
    }
  }
  throw EvalError("corrupt expression node");
}

// Precedence levels used by the printer; higher binds tighter.
int prec(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
      return 1;
    case ExprNode::Kind::Unary:
      return n.func == UnaryFunc::Neg ? 3 : 5;
    default:
      return 5;
  }
}

void print_node(std::ostream& os, const ExprNode& n, int parent_prec);

void print_child(std::ostream& os, const ExprNode& n, int min_prec) {
  bool parens = prec(n) < min_prec;
  if (parens) os << '(';
  print_node(os, n, 0);
  if (parens) os << ')';
}

void print_node(std::ostream& os, const ExprNode& n, int) {
  switch (n.kind) {
    case ExprNode::Kind::Number: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), n.value);
      (void)ec;
      os << std::string_view(buf, ptr - buf);
      return;
    }
    case ExprNode::Kind::Var: os << 'x'; return;
    case ExprNode::Kind::Pi: os << "pi"; return;
    case ExprNode::Kind::Unary:
      if (n.func == UnaryFunc::Neg) {
        os << '-';
        print_child(os, *n.lhs, 3);
      } else {
        os << func_name(n.func) << '(';
        print_node(os, *n.lhs, 0);
        os << ')';
      }
      return;
    case ExprNode::Kind::Binary: {
      const char* sym = "";
      int p = prec(n);
      // Left-associative ops parenthesize an equal-precedence rhs so the
      // tree shape survives a print/parse round trip.
      int rhs_min = p + 1;
      int lhs_min = p;
      switch (n.op) {
        case BinaryOp::Add: sym = " + "; break;
        case BinaryOp::Sub: sym = " - "; break;
        case BinaryOp::Mul: sym = "*"; break;
        case BinaryOp::Div: sym = "/"; break;
        case BinaryOp::Pow:
          sym = "^";
          lhs_min = 5;   // lhs of ^ must be an atom or parenthesized
          rhs_min = 3;   // rhs may be a unary minus or another power
          break;
      }
      print_child(os, *n.lhs, lhs_min);
      os << sym;
      print_child(os, *n.rhs, rhs_min);
      return;
    }
  }
}

bool nodes_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprNode::Kind::Number:
      return a->value == b->value;
    case ExprNode::Kind::Var:
    case ExprNode::Kind::Pi:
      return true;
    case ExprNode::Kind::Unary:
      return a->func == b->func && nodes_equal(a->lhs, b->lhs);
    case ExprNode::Kind::Binary:
      return a->op == b->op && nodes_equal(a->lhs, b->lhs) && nodes_equal(a->rhs, b->rhs);
  }
  return false;
}

}  // namespace

double Expr::eval(double x) const {
  if (!root_) throw EvalError("empty expression");
  return eval_node(*root_, x);
}

Expr::ValueAndDerivative Expr::eval_with_derivative(double x) const {
  if (!root_) throw EvalError("empty expression");
  Dual d = eval_dual(*root_, x);
  return {d.v, d.d};
}

std::string Expr::to_string() const {
  if (!root_) return "";
  std::ostringstream os;
  print_node(os, *root_, 0);
  return os.str();
}

bool Expr::structurally_equal(const Expr& other) const {
  return nodes_equal(root_, other.root_);
}

Expr parse_expr(std::string_view source) {
  Parser p(source);
  return Expr(p.run());
}

Expr make_number(double v) {
  return Expr(node({ExprNode::Kind::Number, v, UnaryFunc::Neg, BinaryOp::Add, nullptr, nullptr}));
}
Expr make_var() {
  return Expr(node({ExprNode::Kind::Var, 0, UnaryFunc::Neg, BinaryOp::Add, nullptr, nullptr}));
}
Expr make_pi() {
  return Expr(node({ExprNode::Kind::Pi, 0, UnaryFunc::Neg, BinaryOp::Add, nullptr, nullptr}));
}
Expr make_unary(UnaryFunc f, Expr operand) {
  return Expr(node({ExprNode::Kind::Unary, 0, f, BinaryOp::Add, operand.root(), nullptr}));
}
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(node({ExprNode::Kind::Binary, 0, UnaryFunc::Neg, op, lhs.root(), rhs.root()}));
}

}  // namespace hpencil::coeffs
