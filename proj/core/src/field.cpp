#include "hpencil/field.hpp"

#include <algorithm>
#include <cmath>

#include "hpencil/errors.hpp"

namespace hpencil::coeffs {

struct CoefficientField::Backend {
  enum class Kind { Expression, Sampled, PiecewiseScaled } kind;

  // Expression
  Expr expr;
  std::string source;

  // Sampled
  std::vector<double> values;

  // PiecewiseScaled
  std::shared_ptr<const Backend> base;
  std::vector<double> breakpoints;  // strictly increasing, inside (a,b)
  std::vector<double> factors;      // breakpoints.size() + 1 entries
  double base_a = 0, base_b = 1;
};

namespace {

using Backend = CoefficientField::Backend;

double eval_backend(const Backend& b, double x, double a, double bb);

double interp_sampled(const std::vector<double>& v, double x, double a, double b) {
  const std::size_t n = v.size() - 1;
  double t = (x - a) / (b - a) * static_cast<double>(n);
  t = std::clamp(t, 0.0, static_cast<double>(n));
  auto i = static_cast<std::size_t>(t);
  if (i >= n) return v[n];
  double w = t - static_cast<double>(i);
  return (1 - w) * v[i] + w * v[i + 1];
}

std::size_t piece_index(const std::vector<double>& breaks, double x) {
  // Cells are [t_k, t_{k+1}): the cell index equals the number of
  // breakpoints <= x.
  return static_cast<std::size_t>(
      std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
}

double eval_backend(const Backend& b, double x, double a, double bb) {
  switch (b.kind) {
    case Backend::Kind::Expression:
      return b.expr.eval(x);
    case Backend::Kind::Sampled:
      return interp_sampled(b.values, x, a, bb);
    case Backend::Kind::PiecewiseScaled:
      return b.factors[piece_index(b.breakpoints, x)] *
             eval_backend(*b.base, x, b.base_a, b.base_b);
  }
  throw EvalError("corrupt field backend");
}

}  // namespace

CoefficientField::CoefficientField(std::shared_ptr<const Backend> backend, double a, double b)
    : backend_(std::move(backend)), a_(a), b_(b) {}

CoefficientField CoefficientField::from_expr(Expr e, double a, double b) {
  if (!(a < b)) throw ValidationError("field domain requires a < b");
  auto be = std::make_shared<Backend>();
  be->kind = Backend::Kind::Expression;
  be->source = e.to_string();
  be->expr = std::move(e);
  return CoefficientField(std::move(be), a, b);
}

CoefficientField CoefficientField::from_source(const std::string& source, double a, double b) {
  if (!(a < b)) throw ValidationError("field domain requires a < b");
  auto be = std::make_shared<Backend>();
  be->kind = Backend::Kind::Expression;
  be->expr = parse_expr(source);
  be->source = source;
  return CoefficientField(std::move(be), a, b);
}

CoefficientField CoefficientField::constant(double value, double a, double b) {
  return from_expr(make_number(value), a, b);
}

CoefficientField CoefficientField::from_samples(std::vector<double> values, double a, double b) {
  if (!(a < b)) throw ValidationError("field domain requires a < b");
  if (values.size() < 2) throw ValidationError("sampled field needs at least 2 samples");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("sampled field contains a non-finite value");
  auto be = std::make_shared<Backend>();
  be->kind = Backend::Kind::Sampled;
  be->values = std::move(values);
  return CoefficientField(std::move(be), a, b);
}

CoefficientField CoefficientField::piecewise_scaled(CoefficientField base,
                                                    std::vector<double> breakpoints,
                                                    std::vector<double> factors) {
  if (factors.size() != breakpoints.size() + 1)
    throw ValidationError("piecewise field needs one factor per cell");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
    throw ValidationError("piecewise breakpoints must be sorted");
  auto be = std::make_shared<Backend>();
  be->kind = Backend::Kind::PiecewiseScaled;
  be->base = base.backend_;
  be->base_a = base.a_;
  be->base_b = base.b_;
  be->breakpoints = std::move(breakpoints);
  be->factors = std::move(factors);
  return CoefficientField(std::move(be), base.a_, base.b_);
}

double CoefficientField::eval(double x) const {
  if (!backend_) throw EvalError("evaluation of an empty coefficient field");
  double v = eval_backend(*backend_, x, a_, b_);
  if (!std::isfinite(v)) throw EvalError("field evaluated to a non-finite value");
  return v;
}

double CoefficientField::derivative(double x) const {
  if (!backend_) throw EvalError("derivative of an empty coefficient field");
  if (backend_->kind == Backend::Kind::Expression)
    return backend_->expr.eval_with_derivative(x).derivative;
  // Second-order central difference with one-sided shifts at the ends.
  double h = (b_ - a_) * 1e-6;
  if (backend_->kind == Backend::Kind::Sampled)
    h = (b_ - a_) / static_cast<double>(backend_->values.size() - 1);
  double lo = x - h, hi = x + h;
  if (lo < a_) { lo = a_; hi = a_ + 2 * h; }
  if (hi > b_) { hi = b_; lo = b_ - 2 * h; }
  double mid = 0.5 * (lo + hi);
  double flo = eval(lo), fmid = eval(mid), fhi = eval(hi);
  // Derivative of the quadratic through (lo, mid, hi) evaluated at x.
  double hh = 0.5 * (hi - lo);
  double d1 = (fhi - flo) / (2 * hh);
  double d2 = (fhi - 2 * fmid + flo) / (hh * hh);
  return d1 + (x - mid) * d2;
}

CoefficientField CoefficientField::shifted(double offset) const {
  if (!backend_) throw EvalError("shift of an empty coefficient field");
  switch (backend_->kind) {
    case Backend::Kind::Expression:
      return from_expr(make_binary(BinaryOp::Add, Expr(backend_->expr), make_number(offset)),
                       a_, b_);
    case Backend::Kind::Sampled: {
      std::vector<double> v = backend_->values;
      for (double& x : v) x += offset;
      return from_samples(std::move(v), a_, b_);
    }
    case Backend::Kind::PiecewiseScaled:
      throw ValidationError("shift of a piecewise-scaled field is not representable");
  }
  throw EvalError("corrupt field backend");
}

CoefficientField CoefficientField::scaled(double factor) const {
  if (!backend_) throw EvalError("scale of an empty coefficient field");
  switch (backend_->kind) {
    case Backend::Kind::Expression:
      return from_expr(make_binary(BinaryOp::Mul, make_number(factor), Expr(backend_->expr)),
                       a_, b_);
    case Backend::Kind::Sampled: {
      std::vector<double> v = backend_->values;
      for (double& x : v) x *= factor;
      return from_samples(std::move(v), a_, b_);
    }
    case Backend::Kind::PiecewiseScaled: {
      auto be = std::make_shared<Backend>(*backend_);
      for (double& f : be->factors) f *= factor;
      return CoefficientField(std::move(be), a_, b_);
    }
  }
  throw EvalError("corrupt field backend");
}

bool CoefficientField::is_expression() const {
  return backend_ && backend_->kind == Backend::Kind::Expression;
}

std::optional<std::string> CoefficientField::source() const {
  if (!is_expression()) return std::nullopt;
  return backend_->source;
}

std::size_t CoefficientField::sample_count() const {
  return backend_ && backend_->kind == Backend::Kind::Sampled ? backend_->values.size() : 0;
}

const std::vector<double>& CoefficientField::samples() const {
  static const std::vector<double> empty;
  return backend_ && backend_->kind == Backend::Kind::Sampled ? backend_->values : empty;
}

CoefficientField sample_field(const CoefficientField& f, int n) {
  if (n < 2) throw ValidationError("sample_field requires n >= 2");
  const double a = f.domain_a(), b = f.domain_b();
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    try {
      values[static_cast<std::size_t>(i)] = f.eval(x);
    } catch (const Error& e) {
      throw EvalError(std::string(e.what()) + " while sampling at x=" + std::to_string(x));
    }
  }
  return CoefficientField::from_samples(std::move(values), a, b);
}

}  // namespace hpencil::coeffs
