#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hpencil/expr.hpp"

namespace hpencil::coeffs {

/// Real-valued coefficient function of x on a fixed domain [a,b].
///
/// Backends:
///  - expression: exact evaluation of a parsed Expr,
///  - sampled: uniform grid samples with linear interpolation,
///  - piecewise-scaled: a base field times a piecewise-constant factor
///    (cells are half-open on the left: [t_k, t_{k+1})).
///
/// Fields are immutable after construction and safe to share across threads.
class CoefficientField {
public:
  /// Empty field; any evaluation throws. Exists so aggregates holding
  /// fields stay default-constructible.
  CoefficientField() = default;

  static CoefficientField from_expr(Expr e, double a, double b);
  static CoefficientField from_source(const std::string& source, double a, double b);
  static CoefficientField constant(double value, double a, double b);
  static CoefficientField from_samples(std::vector<double> values, double a, double b);
  static CoefficientField piecewise_scaled(CoefficientField base,
                                           std::vector<double> breakpoints,
                                           std::vector<double> factors);

  double domain_a() const { return a_; }
  double domain_b() const { return b_; }

  /// Value at x. Sampled fields clamp x to [a,b] before interpolating.
  double eval(double x) const;

  /// d/dx at x: exact (dual-number) for expression fields, second-order
  /// differences otherwise.
  double derivative(double x) const;

  /// this + offset, resp. factor * this. Shifting a piecewise-scaled field
  /// has no exact representation and throws.
  CoefficientField shifted(double offset) const;
  CoefficientField scaled(double factor) const;

  bool is_expression() const;
  /// Source text when expression-backed (parsed input or canonical print).
  std::optional<std::string> source() const;

  /// Number of stored samples (0 for non-sampled backends).
  std::size_t sample_count() const;
  const std::vector<double>& samples() const;

  struct Backend;  // implementation detail, defined in field.cpp

private:
  CoefficientField(std::shared_ptr<const Backend> backend, double a, double b);

  std::shared_ptr<const Backend> backend_;
  double a_ = 0;
  double b_ = 1;
};

/// Sample f onto n+1 uniform points covering [a,b] (endpoints included).
/// Requires n >= 2; evaluation errors propagate with the offending x.
CoefficientField sample_field(const CoefficientField& f, int n);

}  // namespace hpencil::coeffs
