#include "hpencil/epi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "hpencil/errors.hpp"
#include "hpencil/parallel.hpp"

namespace hpencil::epi {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

bool identically_zero(const coeffs::CoefficientField& f) {
  for (int i = 0; i <= 512; ++i) {
    double x = f.domain_a() + (f.domain_b() - f.domain_a()) * i / 512.0;
    if (f.eval(x) != 0) return false;
  }
  return true;
}

// Fig.-3 baseline: the only constant diffusion stated anywhere in the
// epidemiology section is the vaccine-study value, reused here.
RabiesParams fig3_base() {
  RabiesParams rp;
  rp.a = 0.0027;
  rp.b = rp.a / 2;
  rp.sigma = 0.0357;
  rp.K = 0.98;
  rp.alpha = coeffs::CoefficientField::constant(0.2, 0, 1);
  rp.beta = coeffs::CoefficientField::constant(0.2192, 0, 1);
  rp.D = coeffs::CoefficientField::constant(0.1371, 0, 1);
  return rp;
}

}  // namespace

void RabiesParams::validate() const {
  if (!(a > 0)) throw ValidationError("birth rate a must be positive");
  if (!(b > 0)) throw ValidationError("death rate b must be positive");
  if (!(sigma > 0)) throw ValidationError("inverse incubation sigma must be positive");
  if (!(K > 0)) throw ValidationError("carrying capacity K must be positive");
  // Rate fields are scanned at interior sample points; the transmission may
  // touch zero (it does at the ends of the unit interval) but never below.
  for (int i = 0; i < 512; ++i) {
    double x = (i + 0.5) / 512.0;
    if (!(alpha.eval(x) > 0))
      throw ValidationError("alpha(x) must be positive on (0,1); fails near x = " +
                            std::to_string(x));
    if (beta.eval(x) < 0)
      throw ValidationError("beta(x) must be nonnegative on (0,1); fails near x = " +
                            std::to_string(x));
    if (!(D.eval(x) > 0))
      throw ValidationError("D(x) must be positive on (0,1); fails near x = " +
                            std::to_string(x));
  }
}

void VaccineStrategy::validate() const {
  if (!(c0 >= 0)) throw ValidationError("vaccine quantity c0 must be >= 0");
  if (!(L > 0)) throw ValidationError("vaccine length L must be positive");
  if (a0 < 0 || a0 + L > 1 + 1e-12)
    throw ValidationError("vaccine window must satisfy 0 <= a0 and a0 + L <= 1");
}

pencil::PencilProblem build_stability_pencil(const RabiesParams& rp) {
  rp.validate();
  pencil::PencilProblem p;
  p.a = 0;
  p.b = 1;
  p.D = rp.D;
  p.W0 = coeffs::CoefficientField::constant(1, 0, 1);
  p.V = rp.alpha.shifted(rp.a);
  p.bc_left = pencil::BoundaryCondition::neumann();
  p.bc_right = pencil::BoundaryCondition::neumann();
  if (!identically_zero(rp.beta))
    p.poles.push_back({rp.sigma + rp.a, rp.beta.scaled(rp.sigma * rp.K)});
  return p;
}

pencil::PencilProblem build_r0_problem(const RabiesParams& rp) {
  rp.validate();
  pencil::PencilProblem p;
  p.a = 0;
  p.b = 1;
  p.D = rp.D;
  p.V = rp.alpha.shifted(rp.a);
  p.W0 = rp.beta.scaled(rp.sigma * rp.K / (rp.sigma + rp.a));
  p.bc_left = pencil::BoundaryCondition::neumann();
  p.bc_right = pencil::BoundaryCondition::neumann();
  return p;
}

double principal_growth_rate(const RabiesParams& rp, int n_x) {
  pencil::PencilProblem p = build_stability_pencil(rp);
  pencil::DiscreteGrid grid(p, n_x);
  double lambda_tilde_min = pencil::leftmost_eigenvalue(p, grid);
  return -lambda_tilde_min;
}

double reproduction_number(const RabiesParams& rp, int n_x) {
  pencil::PencilProblem p = build_r0_problem(rp);
  pencil::DiscreteGrid grid(p, n_x);
  double mu1 = pencil::leftmost_eigenvalue(p, grid);
  if (!(mu1 > 0))
    throw NumericalError("principal eigenvalue of the weighted problem is not positive");
  return 1.0 / mu1;
}

SignConsistency sign_consistency(const RabiesParams& rp, int n_x, double tol) {
  SignConsistency out;
  out.lambda0 = principal_growth_rate(rp, n_x);
  out.r0 = identically_zero(rp.beta) ? 0.0 : reproduction_number(rp, n_x);
  double excess = out.r0 - 1;
  // Either indicator inside its tolerance band marks the stability
  // boundary, where a sign comparison has no content.
  if (std::abs(out.lambda0) <= tol || std::abs(excess) <= tol)
    out.consistent = true;
  else
    out.consistent = (out.lambda0 > 0) == (excess > 0);
  return out;
}

coeffs::CoefficientField vaccine_beta(const coeffs::CoefficientField& beta_base,
                                      const VaccineStrategy& vs) {
  vs.validate();
  if (vs.c0 == 0) return beta_base;
  double factor = 1.0 / (1.0 + vs.c0 / vs.L);
  return coeffs::CoefficientField::piecewise_scaled(
      beta_base, {vs.a0, std::min(vs.a0 + vs.L, 1.0)}, {1.0, factor, 1.0});
}

RabiesParams with_vaccine(const RabiesParams& rp, const VaccineStrategy& vs) {
  RabiesParams out = rp;
  out.beta = vaccine_beta(rp.beta, vs);
  return out;
}

SweepResult vaccine_sweep(const RabiesParams& rp, double c0,
                          const std::vector<double>& a0_grid,
                          const std::vector<double>& L_grid, int n_x) {
  rp.validate();
  if (!(c0 >= 0)) throw ValidationError("c0 must be >= 0");

  SweepResult out;
  out.c0 = c0;
  out.n_x = n_x;
  for (double a0 : a0_grid)
    for (double L : L_grid)
      if (a0 >= 0 && L > 0 && a0 + L <= 1 + 1e-12)
        out.points.push_back({a0, L, 0, false});
  if (out.points.empty())
    throw ValidationError("vaccine sweep has an empty admissible (a0, L) set");

  parallel_for(out.points.size(), [&](std::size_t i) {
    SweepPoint& pt = out.points[i];
    VaccineStrategy vs{c0, pt.a0, pt.L};
    pt.lambda0 = principal_growth_rate(with_vaccine(rp, vs), n_x);
    pt.stable = pt.lambda0 < 0;
  });

  out.minimizer = *std::min_element(
      out.points.begin(), out.points.end(),
      [](const SweepPoint& x, const SweepPoint& y) { return x.lambda0 < y.lambda0; });

  // lambda0 = 0 contour crossings along grid lines, in deterministic order.
  auto interp = [](double t0, double v0, double t1, double v1) {
    return t0 + (0 - v0) * (t1 - t0) / (v1 - v0);
  };
  for (double a0 : a0_grid) {
    const SweepPoint* prev = nullptr;
    for (const auto& pt : out.points) {
      if (pt.a0 != a0) continue;
      if (prev && prev->lambda0 * pt.lambda0 < 0)
        out.boundary.emplace_back(a0, interp(prev->L, prev->lambda0, pt.L, pt.lambda0));
      prev = &pt;
    }
  }
  for (double L : L_grid) {
    const SweepPoint* prev = nullptr;
    for (double a0 : a0_grid) {
      auto it = std::find_if(out.points.begin(), out.points.end(), [&](const SweepPoint& q) {
        return q.a0 == a0 && q.L == L;
      });
      if (it == out.points.end()) continue;
      if (prev && prev->lambda0 * it->lambda0 < 0)
        out.boundary.emplace_back(interp(prev->a0, prev->lambda0, it->a0, it->lambda0), L);
      prev = &*it;
    }
  }
  return out;
}

HeterogeneityResult heterogeneity_experiment(HeterogeneityKind kind,
                                             const std::vector<double>& values, int n_x) {
  if (values.empty()) throw ValidationError("heterogeneity sweep needs values");

  HeterogeneityResult out;
  out.kind = kind;
  out.rows.resize(values.size());

  auto params_for = [&](double v) {
    RabiesParams rp = fig3_base();
    switch (kind) {
      case HeterogeneityKind::BetaC1:
        rp.beta = coeffs::CoefficientField::from_source(
            "0.2192*(1 + " + fmt(v) + "*cos(pi*x))", 0, 1);
        break;
      case HeterogeneityKind::AlphaC2:
        rp.alpha = coeffs::CoefficientField::from_source(
            "0.2*(1 + " + fmt(v) + "*cos(pi*x))", 0, 1);
        break;
      case HeterogeneityKind::DiffusionD0:
        // Mean-preserving alpha recipe evaluated at c2 = 0: alpha = 2/pi.
        rp.alpha = coeffs::CoefficientField::from_source("2/pi", 0, 1);
        rp.D = coeffs::CoefficientField::from_source(fmt(v) + "*(1 + cos(pi*x))", 0, 1);
        break;
      case HeterogeneityKind::DiffusionC3:
        rp.D = coeffs::CoefficientField::from_source(
            "0.0685*(1 + " + fmt(v) + "*cos(pi*x))", 0, 1);
        break;
    }
    return rp;
  };

  parallel_for(values.size(), [&](std::size_t i) {
    out.rows[i] = {values[i], reproduction_number(params_for(values[i]), n_x)};
  });

  switch (kind) {
    case HeterogeneityKind::BetaC1:
    case HeterogeneityKind::AlphaC2: {
      auto argmin = std::min_element(
          out.rows.begin(), out.rows.end(),
          [](const HeterogeneityRow& x, const HeterogeneityRow& y) { return x.r0 < y.r0; });
      double closest_to_zero = std::numeric_limits<double>::infinity();
      for (const auto& row : out.rows)
        closest_to_zero = std::min(closest_to_zero, std::abs(row.value));
      out.property_holds = std::abs(argmin->value) == closest_to_zero;
      out.property = "R0 is minimized at the homogeneous point of the sweep";
      break;
    }
    case HeterogeneityKind::DiffusionD0:
    case HeterogeneityKind::DiffusionC3: {
      double lo = std::numeric_limits<double>::infinity(), hi = 0;
      for (const auto& row : out.rows) {
        lo = std::min(lo, row.r0);
        hi = std::max(hi, row.r0);
      }
      out.property_holds = (hi - lo) <= 1e-8 * std::max(1.0, hi);
      out.property = "R0 is constant across the sweep (homogeneous beta and alpha)";
      break;
    }
  }
  return out;
}

}  // namespace hpencil::epi
