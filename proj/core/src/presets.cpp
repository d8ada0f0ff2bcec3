#include "hpencil/presets.hpp"

#include <cmath>

#include "hpencil/errors.hpp"

namespace hpencil::presets {

std::vector<std::string> preset_names() {
  return {"example39", "capasso", "morphogen", "rabies-fig3", "rabies-vaccine"};
}

pencil::PencilProblem example39() {
  pencil::PencilProblem p;
  p.a = 0;
  p.b = M_PI;
  p.D = coeffs::CoefficientField::constant(1, p.a, p.b);
  p.V = coeffs::CoefficientField::from_source("sin(x)", p.a, p.b);
  p.W0 = coeffs::CoefficientField::constant(1, p.a, p.b);
  p.poles.push_back({2.0, coeffs::CoefficientField::from_source("0.2 + cos(x)^2", p.a, p.b)});
  p.bc_left = pencil::BoundaryCondition::dirichlet();
  p.bc_right = pencil::BoundaryCondition::dirichlet();
  return p;
}

herglotz::TwoSpeciesJacobian CapassoParams::jacobian_at(double x) const {
  // f(u,v) = -a11 u + a12 v,  g(u,v) = gtilde(u) - a22 v.
  return {-a11, a12, gprime.eval(x), -a22};
}

pencil::PencilProblem CapassoParams::pencil() const {
  if (!(a11 > 0 && a12 > 0 && a22 > 0 && d > 0))
    throw ValidationError("capasso parameters a11, a12, a22, d must be positive");
  pencil::PencilProblem p;
  p.a = gprime.domain_a();
  p.b = gprime.domain_b();
  p.D = coeffs::CoefficientField::constant(d, p.a, p.b);
  p.V = coeffs::CoefficientField::constant(a11, p.a, p.b);
  p.W0 = coeffs::CoefficientField::constant(1, p.a, p.b);
  p.poles.push_back({a22, gprime.scaled(a12)});
  p.bc_left = pencil::BoundaryCondition::neumann();
  p.bc_right = pencil::BoundaryCondition::neumann();
  return p;
}

herglotz::RationalHerglotz MorphogenParams::q_plus_lambda_at(double x) const {
  if (!(f0 > 0 && g0 > 0 && h0 > 0))
    throw ValidationError("morphogen rates f0, g0, h0 must be positive");
  double abar_x = abar.eval(x);
  if (abar_x < 0) throw ValidationError("abar must be nonnegative");
  double P = f0 + g0 + h0 * abar_x;
  double kappa = h0 * (f0 + g0) / P;
  herglotz::RationalHerglotz f;
  f.linear = 1;
  f.constant = kappa;
  f.poles.push_back({-P, kappa * (P - g0)});  // P - g0 = f0 + h0*abar > 0
  f.validate();
  return f;
}

pencil::PencilProblem MorphogenParams::pencil() const {
  if (!(f0 > 0 && g0 > 0 && h0 > 0))
    throw ValidationError("morphogen rates f0, g0, h0 must be positive");
  // The pole location P = f0 + g0 + h0*abar(x) must not vary with x.
  double lo = abar.eval(abar.domain_a()), hi = lo;
  for (int i = 0; i <= 512; ++i) {
    double x = abar.domain_a() + (abar.domain_b() - abar.domain_a()) * i / 512.0;
    double v = abar.eval(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo > 1e-12 * std::max(1.0, std::abs(hi)))
    throw ValidationError(
        "morphogen pencil needs a constant abar: a varying profile moves the pole with x "
        "(essential spectrum), which this solver does not cover");
  double abar0 = 0.5 * (lo + hi);
  if (abar0 < 0) throw ValidationError("abar must be nonnegative");

  double P = f0 + g0 + h0 * abar0;
  double kappa = h0 * (f0 + g0) / P;
  pencil::PencilProblem p;
  p.a = abar.domain_a();
  p.b = abar.domain_b();
  p.D = coeffs::CoefficientField::constant(1, p.a, p.b);
  p.V = coeffs::CoefficientField::constant(kappa, p.a, p.b);
  p.W0 = coeffs::CoefficientField::constant(1, p.a, p.b);
  p.poles.push_back({P, coeffs::CoefficientField::constant(kappa * (P - g0), p.a, p.b)});
  p.bc_left = pencil::BoundaryCondition::neumann();
  p.bc_right = pencil::BoundaryCondition::dirichlet();
  return p;
}

epi::RabiesParams rabies_fig3() {
  epi::RabiesParams rp;
  rp.a = 0.0027;
  rp.b = rp.a / 2;
  rp.sigma = 0.0357;
  rp.K = 0.98;
  rp.alpha = coeffs::CoefficientField::constant(0.2, 0, 1);
  rp.beta = coeffs::CoefficientField::constant(0.2192, 0, 1);
  rp.D = coeffs::CoefficientField::constant(0.1371, 0, 1);
  return rp;
}

epi::RabiesParams rabies_vaccine() {
  epi::RabiesParams rp;
  rp.a = 0.0027;
  rp.b = rp.a / 2;
  rp.sigma = 0.0357;
  rp.K = 1.5;
  rp.alpha = coeffs::CoefficientField::constant(0.2, 0, 1);
  // 6x(1-x) is the unit-mean spatial profile; the transmission magnitude
  // 0.2192 carries over from the homogeneous study. This scaling is what
  // places the vaccination threshold at c0 = 0.44.
  rp.beta = coeffs::CoefficientField::from_source("0.2192*6*x*(1-x)", 0, 1);
  rp.D = coeffs::CoefficientField::constant(0.1371, 0, 1);
  return rp;
}

}  // namespace hpencil::presets
