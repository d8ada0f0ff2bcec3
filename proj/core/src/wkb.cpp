#include "hpencil/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "hpencil/errors.hpp"

namespace hpencil::wkb {

namespace {

constexpr int kValiditySamples = 1024;

double min_g(const pencil::PencilProblem& p, double lambda) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kValiditySamples; ++i) {
    double x = p.a + (p.b - p.a) * static_cast<double>(i) / kValiditySamples;
    lo = std::min(lo, p.g(x, lambda));
  }
  return lo;
}

// Adaptive Simpson with straddle-splitting on the absolute tolerance.
class Simpson {
public:
  explicit Simpson(std::function<double(double)> f) : f_(std::move(f)) {}

  double integrate(double a, double b, double tol) {
    double fa = f_(a), fm = f_(0.5 * (a + b)), fb = f_(b);
    return recurse(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 60);
  }

private:
  std::function<double(double)> f_;

  static double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6 * (fa + 4 * fm + fb);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole,
                 double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f_(lm), frm = f_(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15 * tol)
      return left + right + delta / 15;
    return recurse(a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           recurse(m, b, fm, frm, fb, right, tol / 2, depth - 1);
  }
};

double phase_integrand(const pencil::PencilProblem& p, double lambda, double x) {
  double g = p.g(x, lambda);
  if (g < 0) {
    // The validity scan is sampled, so right at the edge the true minimum
    // can dip slightly below zero between samples; clamp that noise.
    if (g > -1e-8 * std::max(1.0, std::abs(lambda))) return 0.0;
    throw NumericalError("outside WKB validity: g(x, lambda) < 0 at x = " +
                         std::to_string(x));
  }
  double d = p.D.eval(x);
  if (!(d > 0)) throw ValidationError("D(x) must be positive");
  return std::sqrt(g / d);
}

}  // namespace

double wkb_phase(const pencil::PencilProblem& p, double lambda, double quad_tol) {
  p.validate();
  double gmin = min_g(p, lambda);
  if (gmin < 0)
    throw NumericalError("outside WKB validity: min g(x, lambda) = " +
                         std::to_string(gmin) + " at lambda = " + std::to_string(lambda));
  Simpson quad([&](double x) { return phase_integrand(p, lambda, x); });
  return quad.integrate(p.a, p.b, quad_tol) / M_PI;
}

double validity_threshold(const pencil::PencilProblem& p, int j) {
  p.validate();
  if (j < 0 || j > p.pole_count()) throw ValidationError("interval index out of range");
  const double lo_end = p.interval_lower(j);
  const double hi_end = p.interval_upper(j);

  // Bracket the zero of the increasing function lambda -> min_x g(x, lambda).
  double lo, hi;
  if (std::isfinite(lo_end)) {
    double step = std::isfinite(hi_end) ? (hi_end - lo_end) / 4 : 1.0;
    lo = lo_end + step;
    while (min_g(p, lo) > 0) {
      step *= 0.5;
      if (step < 1e-13 * std::max(1.0, std::abs(lo_end)))
        throw NumericalError("validity region appears to fill the interval bottom");
      lo = lo_end + step;
    }
  } else {
    lo = std::isfinite(hi_end) ? hi_end - 1 : -1;
    while (min_g(p, lo) > 0) {
      lo = std::isfinite(hi_end) ? hi_end - 2 * (hi_end - lo) : 2 * lo;
      if (!std::isfinite(lo)) throw NumericalError("no lower validity bracket");
    }
  }
  if (std::isfinite(hi_end)) {
    double step = (hi_end - lo) / 4;
    hi = hi_end - step;
    while (min_g(p, hi) < 0) {
      step *= 0.5;
      if (step < 1e-13 * std::max(1.0, std::abs(hi_end)))
        throw NumericalError("validity region is empty in this interval");
      hi = hi_end - step;
    }
  } else {
    hi = std::max(lo + 1, 1.0);
    while (min_g(p, hi) < 0) {
      hi = lo + 2 * (hi - lo);
      if (!std::isfinite(hi)) throw NumericalError("validity region is empty");
    }
  }

  while (hi - lo > 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (min_g(p, mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double wkb_eigenvalue(const pencil::PencilProblem& p, int j, int k, double tol,
                      double quad_tol) {
  if (k < 1) throw ValidationError("wkb_eigenvalue requires k >= 1");
  const double hi_end = p.interval_upper(j);
  const double edge = validity_threshold(p, j);

  // Back off the edge until the sampled validity test holds strictly; the
  // scan that located the edge can sit a hair below the true threshold.
  double buffer = 1e-9 * std::max(1.0, std::abs(edge));
  double lo = edge + buffer;
  double phase_lo = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      phase_lo = wkb_phase(p, lo, quad_tol);
      break;
    } catch (const NumericalError&) {
      if (attempt > 20) throw;
      buffer *= 10;
      lo = edge + buffer;
    }
  }
  if (phase_lo >= k)
    throw NumericalError("k below WKB range: the validity edge of interval " +
                         std::to_string(j) + " already has phase " +
                         std::to_string(phase_lo));

  double hi;
  if (std::isfinite(hi_end)) {
    double step = (hi_end - lo) / 2;
    hi = hi_end - step;
    while (hi <= lo || wkb_phase(p, hi, quad_tol) < k) {
      step *= 0.5;
      hi = hi_end - step;
      if (step < 1e-12 * std::max(1.0, std::abs(hi_end)))
        throw NumericalError("wkb_eigenvalue: bracket not found below the pole");
    }
  } else {
    hi = std::max(2 * std::abs(lo), 1.0);
    while (wkb_phase(p, hi, quad_tol) < k) {
      hi *= 2;
      if (!std::isfinite(hi)) throw NumericalError("wkb_eigenvalue: no upper bracket");
    }
  }

  while (hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (wkb_phase(p, mid, quad_tol) < k ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

int quantization_index(const pencil::PencilProblem& p, int oscillation_k) {
  if (oscillation_k < 0) throw ValidationError("oscillation index must be >= 0");
  bool both_dirichlet = p.bc_left.is_dirichlet() && p.bc_right.is_dirichlet();
  return oscillation_k + (both_dirichlet ? 1 : 0);
}

double accumulation_constant(const pencil::PencilProblem& p, int i, double quad_tol) {
  p.validate();
  if (i < 1 || i > p.pole_count()) throw ValidationError("pole index is 1-based");
  const auto& w = p.poles[static_cast<std::size_t>(i - 1)].weight;
  Simpson quad([&](double x) {
    double wx = w.eval(x);
    double dx = p.D.eval(x);
    if (!(wx > 0) || !(dx > 0))
      throw ValidationError("accumulation constant needs W_i > 0 and D > 0");
    return std::sqrt(wx / dx);
  });
  double integral = quad.integrate(p.a, p.b, quad_tol) / M_PI;
  return integral * integral;
}

Eigen::VectorXd wkb_eigenfunction(const pencil::PencilProblem& p, double lambda,
                                  const pencil::DiscreteGrid& g, double quad_tol) {
  if (g.a != p.a || g.b != p.b)
    throw ValidationError("grid domain does not match problem domain");
  double gmin = min_g(p, lambda);
  if (gmin < 0)
    throw NumericalError("outside WKB validity: min g = " + std::to_string(gmin));

  // Phase offset solving the left boundary condition at leading order.
  double phi0;
  if (p.bc_left.is_dirichlet()) {
    phi0 = -M_PI / 2;
  } else if (p.bc_left.is_neumann()) {
    phi0 = 0;
  } else {
    double ga = std::max(p.g(p.a, lambda), 0.0);
    phi0 = -std::atan2(p.bc_left.b0 * std::sqrt(p.D.eval(p.a)),
                       p.bc_left.b1 * std::sqrt(ga));
  }

  Simpson quad([&](double x) { return phase_integrand(p, lambda, x); });
  const int n = g.interior_count();
  Eigen::VectorXd out(n);
  double phase = 0;
  double prev_x = p.a;
  double cell_tol = quad_tol / std::max(1, n);
  for (int i = 1; i <= n; ++i) {
    double xi = g.x(i);
    phase += quad.integrate(prev_x, xi, cell_tol);
    prev_x = xi;
    double gx = std::max(p.g(xi, lambda), 1e-300);
    out(i - 1) = std::cos(phase + phi0) / (std::sqrt(p.D.eval(xi)) * std::pow(gx, 0.25));
  }

  double scale = out.cwiseAbs().maxCoeff();
  if (scale == 0) throw NumericalError("WKB eigenfunction vanished identically");
  double s = 1.0 / scale;
  for (int i = 0; i < n; ++i) {
    if (std::abs(out(i)) >= 1e-10 * scale) {
      if (out(i) < 0) s = -s;
      break;
    }
  }
  return out * s;
}

}  // namespace hpencil::wkb
