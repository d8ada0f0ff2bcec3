#include "hpencil/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hpencil/errors.hpp"

namespace hpencil::prufer {

namespace {

constexpr double kPi = M_PI;

struct Rhs {
  const pencil::PencilProblem& p;
  double lambda;

  void operator()(double x, const double y[2], double dy[2]) const {
    double d = p.D.eval(x);
    if (!(d > 0)) throw ValidationError("D(x) must stay positive along the integration");
    double dlog = p.D.derivative(x) / d;
    double g_over_d = p.g(x, lambda) / d;
    if (!std::isfinite(g_over_d))
      throw NumericalError("non-finite g(x, lambda) along the integration");
    double s = std::sin(y[0]), c = std::cos(y[0]);
    dy[0] = -s * s - g_over_d * c * c - dlog * s * c;
    dy[1] = (1 - g_over_d) * s * c - dlog * s * s;
  }
};

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

void refuse_near_pole(const pencil::PencilProblem& p, double lambda) {
  if (p.poles.empty()) return;
  double spread = std::max(1.0, p.poles.back().alpha - p.poles.front().alpha);
  for (const auto& pole : p.poles)
    if (std::abs(lambda - pole.alpha) < 1e-6 * spread)
      throw NumericalError("lambda is too close to pole alpha = " +
                           std::to_string(pole.alpha) + " for the angle integration");
}

// Number of integers m with lo < m < hi (strict).
int integers_strictly_between(double lo, double hi) {
  if (!(lo < hi)) return 0;
  auto first = static_cast<long long>(std::floor(lo)) + 1;
  auto last = static_cast<long long>(std::ceil(hi)) - 1;
  if (static_cast<double>(first) <= lo) ++first;
  if (static_cast<double>(last) >= hi) --last;
  return last >= first ? static_cast<int>(last - first + 1) : 0;
}

double pole_spread(const pencil::PencilProblem& p) {
  if (p.poles.empty()) return 1.0;
  return std::max(1.0, p.poles.back().alpha - p.poles.front().alpha);
}

}  // namespace

double initial_angle(const pencil::BoundaryCondition& bc) {
  bc.validate();
  double t = std::atan2(-bc.b0, bc.b1);
  while (t > kPi / 2) t -= kPi;
  while (t <= -kPi / 2) t += kPi;
  return t;
}

double target_angle(const pencil::BoundaryCondition& bc) {
  bc.validate();
  double t = std::atan2(-bc.b0, bc.b1);
  while (t >= kPi / 2) t -= kPi;
  while (t < -kPi / 2) t += kPi;
  return t;
}

IntegrationResult integrate_prufer(const pencil::PencilProblem& p, double lambda,
                                   double rel_tol) {
  p.validate();
  refuse_near_pole(p, lambda);
  Rhs rhs{p, lambda};

  double x = p.a;
  double y[2] = {initial_angle(p.bc_left), 0.0};
  double k1[2];
  rhs(x, y, k1);

  const double abs_tol = 1e-12;
  const double span = p.b - p.a;
  double h = span / 64;
  IntegrationResult out;
  const int max_steps = 2'000'000;

  while (x < p.b) {
    if (x + h > p.b) h = p.b - x;
    if (h < 1e-14 * span) throw NumericalError("step-size underflow in angle integration");

    double k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2];
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * A21 * k1[i];
    rhs(x + C2 * h, yt, k2);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    rhs(x + C3 * h, yt, k3);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    rhs(x + C4 * h, yt, k4);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    rhs(x + C5 * h, yt, k5);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    rhs(x + h, yt, k6);
    double ynew[2];
    for (int i = 0; i < 2; ++i)
      ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    rhs(x + h, ynew, k7);

    double err = 0;
    for (int i = 0; i < 2; ++i) {
      double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                      E7 * k7[i]);
      double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    // Large angle swings within one step would make level counting
    // ambiguous; force a retry with a smaller step.
    bool big_swing = std::abs(ynew[0] - y[0]) > kPi / 2;

    if (err <= 1.0 && !big_swing) {
      double theta_old = y[0], theta_new = ynew[0];
      // Roots of p sit on the levels Theta = pi/2 - m*pi, where Theta' = -1:
      // genuine crossings are always downward. Count levels passed downward;
      // an upward pass means the integration lost the dynamics.
      if (theta_new < theta_old) {
        out.crossings += integers_strictly_between((kPi / 2 - theta_old) / kPi,
                                                   (kPi / 2 - theta_new) / kPi);
      } else if (theta_new > theta_old) {
        if (integers_strictly_between((kPi / 2 - theta_new) / kPi,
                                      (kPi / 2 - theta_old) / kPi) > 0)
          throw NumericalError("upward crossing of a root level; tighten rel_tol");
      }
      x += h;
      y[0] = ynew[0];
      y[1] = ynew[1];
      k1[0] = k7[0];
      k1[1] = k7[1];
      if (++out.steps > max_steps)
        throw NumericalError("angle integration exceeded the step budget");
    }

    double shrink = big_swing ? 0.5 : 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::clamp(shrink, 0.2, 5.0);
  }

  // An angle that lands a hair below a root level at x = b is the boundary
  // root of a converged eigenfunction, not an interior root. The window
  // absorbs d(theta_b)/d(lambda) times the shooter's lambda tolerance,
  // which is large when lambda sits close to a pole.
  double nearest = kPi / 2 - std::round((kPi / 2 - y[0]) / kPi) * kPi;
  if (nearest > y[0] && nearest - y[0] < 1e-4 && out.crossings > 0) --out.crossings;

  out.theta_b = y[0];
  out.log_radius_b = y[1];
  return out;
}

ShootResult shoot_eigenvalue(const pencil::PencilProblem& p, int j, int k, double tol,
                             double rel_tol) {
  if (j < 0 || j > p.pole_count())
    throw ValidationError("interval index j must lie in [0, pole count]");
  if (k < 0) throw ValidationError("oscillation index k must be >= 0");

  const double target = target_angle(p.bc_right) - k * kPi;
  int evals = 0;
  auto miss = [&](double lambda) {
    ++evals;
    return integrate_prufer(p, lambda, rel_tol).theta_b - target;
  };

  const double lo_end = p.interval_lower(j);
  const double hi_end = p.interval_upper(j);
  const double refusal = 2e-6 * pole_spread(p);

  // Theta(b, .) decreases in lambda, so `miss` does too. Find lambda_lo
  // with miss > 0 (toward the lower interval end) and lambda_hi with
  // miss < 0 (toward the upper end).
  double lambda_lo = 0, lambda_hi = 0;
  bool have_lo = false, have_hi = false;

  if (std::isfinite(lo_end)) {
    double step = std::isfinite(hi_end) ? (hi_end - lo_end) / 4 : std::max(1.0, std::abs(lo_end));
    for (; step > refusal; step *= 0.5) {
      double probe = lo_end + step;
      if (miss(probe) > 0) {
        lambda_lo = probe;
        have_lo = true;
        break;
      }
      lambda_hi = probe;
      have_hi = true;
    }
  } else {
    double anchor = std::isfinite(hi_end) ? hi_end : 0.0;
    for (double step = std::max(1.0, std::abs(anchor)); step < 1e13; step *= 2) {
      double probe = anchor - step;
      if (miss(probe) > 0) {
        lambda_lo = probe;
        have_lo = true;
        break;
      }
      lambda_hi = probe;
      have_hi = true;
    }
  }
  if (!have_lo)
    throw NumericalError(
        "shoot_eigenvalue: no lower bracket found; every (j,k) eigenvalue exists, so this "
        "signals integrator tolerance trouble near the interval edge");

  if (!have_hi) {
    if (std::isfinite(hi_end)) {
      for (double step = (hi_end - lambda_lo) / 2; step > refusal; step *= 0.5) {
        double probe = hi_end - step;
        if (probe <= lambda_lo) continue;
        if (miss(probe) < 0) {
          lambda_hi = probe;
          have_hi = true;
          break;
        }
        lambda_lo = probe;
      }
    } else {
      for (double step = std::max(1.0, std::abs(lambda_lo)); step < 1e13; step *= 2) {
        double probe = lambda_lo + step;
        if (miss(probe) < 0) {
          lambda_hi = probe;
          have_hi = true;
          break;
        }
        lambda_lo = probe;
      }
    }
  }
  if (!have_hi)
    throw NumericalError(
        "shoot_eigenvalue: no upper bracket found; every (j,k) eigenvalue exists, so this "
        "signals integrator tolerance trouble near the interval edge");

  ShootResult out;
  out.bracket = {lambda_lo, lambda_hi};
  double lo = lambda_lo, hi = lambda_hi;
  while (hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (miss(mid) > 0 ? lo : hi) = mid;
  }
  out.lambda = 0.5 * (lo + hi);
  out.iterations = evals;

  IntegrationResult final_run = integrate_prufer(p, out.lambda, rel_tol);
  out.theta_b = final_run.theta_b;
  out.crossings = final_run.crossings;
  if (out.crossings != k)
    throw NumericalError("shoot_eigenvalue converged to lambda = " +
                         std::to_string(out.lambda) + " but counted " +
                         std::to_string(out.crossings) + " interior roots instead of " +
                         std::to_string(k));
  return out;
}

}  // namespace hpencil::prufer
