#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "hpencil/errors.hpp"
#include "hpencil/expr.hpp"

using namespace hpencil;
using namespace hpencil::coeffs;

TEST_CASE("grammar: precedence and shapes") {
  Expr e = parse_expr("0.2 + cos(x)^2");
  const ExprNode& root = *e.root();
  REQUIRE(root.kind == ExprNode::Kind::Binary);
  CHECK(root.op == BinaryOp::Add);
  CHECK(root.lhs->kind == ExprNode::Kind::Number);
  CHECK(root.lhs->value == doctest::Approx(0.2));
  const ExprNode& pow = *root.rhs;
  REQUIRE(pow.kind == ExprNode::Kind::Binary);
  CHECK(pow.op == BinaryOp::Pow);
  CHECK(pow.lhs->kind == ExprNode::Kind::Unary);
  CHECK(pow.lhs->func == UnaryFunc::Cos);
  CHECK(pow.rhs->value == doctest::Approx(2.0));

  CHECK(parse_expr("1+2*3").eval(0.7) == doctest::Approx(7.0));
  CHECK(parse_expr("2^3^2").eval(0) == doctest::Approx(512.0));  // right-associative
  CHECK(parse_expr("-2^2").eval(0) == doctest::Approx(-4.0));    // ^ binds tighter
  CHECK(parse_expr("2^-1").eval(0) == doctest::Approx(0.5));
  CHECK(parse_expr(" 1e-3 + .5 + 5. ").eval(0) == doctest::Approx(5.501));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("   "), ParseError);
  try {
    parse_expr("sin(");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_expr("(1+2"), ParseError);
  CHECK_THROWS_AS(parse_expr("1+"), ParseError);
  CHECK_THROWS_AS(parse_expr("y+1"), ParseError);     // unknown identifier
  CHECK_THROWS_AS(parse_expr("foo(x)"), ParseError);  // unknown function
  CHECK_THROWS_AS(parse_expr("sin x"), ParseError);   // missing parens
  CHECK_THROWS_AS(parse_expr("1 2"), ParseError);     // trailing input
  CHECK_THROWS_AS(parse_expr("1e"), ParseError);
}

TEST_CASE("evaluation values and domain errors") {
  CHECK(parse_expr("6*x*(1-x)").eval(0.5) == doctest::Approx(1.5));
  CHECK(parse_expr("pi").eval(0) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK_THROWS_AS(parse_expr("sqrt(x)").eval(-1.0), EvalError);
  CHECK_THROWS_AS(parse_expr("log(x)").eval(0.0), EvalError);
  CHECK_THROWS_AS(parse_expr("1/x").eval(0.0), EvalError);
  CHECK_THROWS_AS(parse_expr("exp(x)").eval(1e9), EvalError);  // overflow -> non-finite
}

TEST_CASE("dual-number derivative matches closed forms") {
  Expr e = parse_expr("0.2 + cos(x)^2");
  for (double x : {0.1, 0.7, 1.9, 3.0}) {
    auto [v, d] = e.eval_with_derivative(x);
    CHECK(v == doctest::Approx(0.2 + std::cos(x) * std::cos(x)).epsilon(1e-14));
    CHECK(d == doctest::Approx(-std::sin(2 * x)).epsilon(1e-12));
  }
  auto [v2, d2] = parse_expr("exp(2*x)/x").eval_with_derivative(0.8);
  CHECK(d2 == doctest::Approx(std::exp(1.6) * (2 * 0.8 - 1) / (0.8 * 0.8)).epsilon(1e-12));
  auto [v3, d3] = parse_expr("tanh(x) + abs(x)").eval_with_derivative(-0.4);
  CHECK(d3 == doctest::Approx(1 - std::tanh(-0.4) * std::tanh(-0.4) - 1).epsilon(1e-12));
  (void)v2;
  (void)v3;
}

namespace {

// Independent random expression generator: builds the tree, a source string
// and its own reference value in one recursion, sharing no code with the
// library evaluator.
struct RefGen {
  std::mt19937 rng;
  explicit RefGen(unsigned seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  // Returns {source, reference value at x}; throws EvalError on a domain
  // violation so the caller can resample.
  std::pair<std::string, double> gen(double x, int depth) {
    if (depth <= 0 || pick(3) == 0) {
      switch (pick(3)) {
        case 0: {
          double v = std::round(uniform(0, 8) * 16) / 16;  // exactly printable
          return {std::to_string(v), v};
        }
        case 1: return {"x", x};
        default: return {"pi", M_PI};
      }
    }
    switch (pick(7)) {
      case 0: {
        auto [sa, va] = gen(x, depth - 1);
        auto [sb, vb] = gen(x, depth - 1);
        return {"(" + sa + ") + (" + sb + ")", va + vb};
      }
      case 1: {
        auto [sa, va] = gen(x, depth - 1);
        auto [sb, vb] = gen(x, depth - 1);
        return {"(" + sa + ") - (" + sb + ")", va - vb};
      }
      case 2: {
        auto [sa, va] = gen(x, depth - 1);
        auto [sb, vb] = gen(x, depth - 1);
        return {"(" + sa + ")*(" + sb + ")", va * vb};
      }
      case 3: {
        auto [sa, va] = gen(x, depth - 1);
        auto [sb, vb] = gen(x, depth - 1);
        if (vb == 0) throw hpencil::EvalError("division by zero in generator");
        return {"(" + sa + ")/(" + sb + ")", va / vb};
      }
      case 4: {
        auto [sa, va] = gen(x, depth - 1);
        int p = pick(4);
        return {"(" + sa + ")^" + std::to_string(p), std::pow(va, p)};
      }
      case 5: {
        auto [sa, va] = gen(x, depth - 1);
        return {"-(" + sa + ")", -va};
      }
      default: {
        auto [sa, va] = gen(x, depth - 1);
        switch (pick(6)) {
          case 0: return {"sin(" + sa + ")", std::sin(va)};
          case 1: return {"cos(" + sa + ")", std::cos(va)};
          case 2: return {"exp(" + sa + ")", va > 50 ? throw hpencil::EvalError("overflow")
                                                     : std::exp(va)};
          case 3: return {"tanh(" + sa + ")", std::tanh(va)};
          case 4:
            if (va < 0) throw hpencil::EvalError("sqrt domain");
            return {"sqrt(" + sa + ")", std::sqrt(va)};
          default:
            return {"abs(" + sa + ")", std::abs(va)};
        }
      }
    }
  }
};

}  // namespace

TEST_CASE("property: reference evaluator and print round trip on 1000 samples") {
  RefGen gen(20240817);
  int done = 0;
  while (done < 1000) {
    double x = gen.uniform(0.05, 2.5);
    std::string src;
    double expected;
    try {
      std::tie(src, expected) = gen.gen(x, 4);
    } catch (const EvalError&) {
      continue;
    }
    if (!std::isfinite(expected) || std::abs(expected) > 1e12) continue;

    CAPTURE(src);
    Expr parsed = parse_expr(src);
    double got = parsed.eval(x);
    CHECK(got == doctest::Approx(expected).epsilon(1e-9));

    Expr reparsed = parse_expr(parsed.to_string());
    CHECK(reparsed.structurally_equal(parsed));
    ++done;
  }
}
