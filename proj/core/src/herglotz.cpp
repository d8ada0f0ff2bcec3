#include "hpencil/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hpencil/errors.hpp"

namespace hpencil::herglotz {

void RationalHerglotz::validate() const {
  if (linear < 0) throw ValidationError("linear coefficient C must be >= 0");
  if (linear == 0 && poles.empty())
    throw ValidationError("need C > 0 or at least one pole");
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!(poles[i].residue > 0)) throw ValidationError("pole residues must be > 0");
    if (i > 0 && !(poles[i - 1].alpha < poles[i].alpha))
      throw ValidationError("poles must be strictly increasing");
  }
}

std::complex<double> eval(const RationalHerglotz& f, std::complex<double> lambda) {
  std::complex<double> acc = f.constant + f.linear * lambda;
  for (const auto& p : f.poles) {
    std::complex<double> den = p.alpha - lambda;
    if (den == std::complex<double>(0, 0))
      throw EvalError("evaluation at a pole (alpha = " + std::to_string(p.alpha) + ")");
    acc += p.residue / den;
  }
  return acc;
}

double derivative_real(const RationalHerglotz& f, double lambda) {
  double acc = f.linear;
  for (const auto& p : f.poles) {
    double den = p.alpha - lambda;
    if (den == 0)
      throw EvalError("derivative at a pole (alpha = " + std::to_string(p.alpha) + ")");
    acc += p.residue / (den * den);
  }
  return acc;
}

double solve(const RationalHerglotz& f, double target, double lo, double hi, double tol) {
  if (!(lo < hi)) throw ValidationError("solve requires lo < hi");
  auto val = [&](double x) { return eval(f, {x, 0}).real() - target; };
  double flo = val(lo), fhi = val(hi);
  if (flo > 0 || fhi < 0)
    throw NumericalError("solve: target not bracketed by [lo, hi]");
  while (hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (val(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool is_herglotz_sampled(const std::function<std::complex<double>(std::complex<double>)>& f,
                         double re_lo, double re_hi, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> re_dist(re_lo, re_hi);
  // Im(lambda) log-uniform over [1e-3, 10].
  std::uniform_real_distribution<double> im_exp(std::log(1e-3), std::log(10.0));
  for (int i = 0; i < count; ++i) {
    std::complex<double> lambda(re_dist(rng), std::exp(im_exp(rng)));
    if (!(f(lambda).imag() > 0)) return false;
  }
  return true;
}

bool is_herglotz_sampled(const RationalHerglotz& f, int count, unsigned seed) {
  double lo = -1, hi = 1;
  if (!f.poles.empty()) {
    double amin = f.poles.front().alpha, amax = f.poles.back().alpha;
    double spread = std::max(amax - amin, 1.0);
    lo = amin - 10 * spread;
    hi = amax + 10 * spread;
  }
  return is_herglotz_sampled([&f](std::complex<double> z) { return eval(f, z); },
                             lo, hi, count, seed);
}

bool check_two_species(const TwoSpeciesJacobian& j) { return j.f_v * j.g_u >= 0; }

QuadraticForm derive_quadratic_form(const ThreeSpeciesJacobian& j) {
  QuadraticForm q;
  q.gamma = -(j.g_v + j.h_w);
  q.delta = j.g_v * j.h_w - j.g_w * j.h_v;
  q.alpha = j.f_v * j.g_u + j.f_w * j.h_u;
  q.beta = j.f_v * (j.h_u * j.g_w - j.g_u * j.h_w) + j.f_w * (j.h_v * j.g_u - j.h_u * j.g_v);
  return q;
}

QuadraticCheck check_quadratic_reduction(const QuadraticForm& q) {
  QuadraticCheck out;
  out.compact_inequalities =
      (q.beta * q.gamma - q.alpha * q.delta > 0) &&
      (q.beta * q.beta - q.alpha * (q.beta * q.gamma - q.alpha * q.delta) < 0);

  if (q.alpha == 0 && q.beta == 0) {
    // Zero numerator: the rational part vanishes, f(lambda) = lambda.
    out.verdict = Verdict::Herglotz;
    out.real_distinct_roots = true;
    out.residues_positive = true;
    out.checks_agree = out.compact_inequalities;
    out.note = "numerator vanishes identically; function reduces to lambda";
    return out;
  }

  double disc = q.gamma * q.gamma - 4 * q.delta;
  if (disc == 0) {
    out.verdict = Verdict::Indeterminate;
    out.note = "double denominator root";
    return out;
  }
  if (disc < 0) {
    out.verdict = Verdict::NotHerglotz;
    out.note = "complex denominator roots";
    out.checks_agree = !out.compact_inequalities;
    return out;
  }

  double s = std::sqrt(disc);
  double r_hi = 0.5 * (-q.gamma + s);
  double r_lo = 0.5 * (-q.gamma - s);
  out.real_distinct_roots = true;
  out.root_lo = r_lo;
  out.root_hi = r_hi;

  // Partial fractions of (alpha*lambda + beta)/((lambda-r_hi)(lambda-r_lo)):
  // a Herglotz sum B + C*lambda + sum A_i/(alpha_i - lambda) needs both
  // residues positive, i.e. alpha*r_hi + beta > 0 > alpha*r_lo + beta.
  double num_hi = q.alpha * r_hi + q.beta;
  double num_lo = q.alpha * r_lo + q.beta;
  out.residue_hi = num_hi / (r_hi - r_lo);
  out.residue_lo = -num_lo / (r_hi - r_lo);

  if (num_hi == 0 || num_lo == 0) {
    out.verdict = Verdict::Indeterminate;
    out.note = "vanishing residue at a denominator root";
    return out;
  }
  out.residues_positive = num_hi > 0 && num_lo < 0;
  out.verdict = out.residues_positive ? Verdict::Herglotz : Verdict::NotHerglotz;
  out.checks_agree = out.residues_positive == out.compact_inequalities;
  return out;
}

ThreeSpeciesCheck check_three_species(const ThreeSpeciesJacobian& j) {
  auto det2 = [](double a, double b, double c, double d) { return a * d - b * c; };
  double d_fg = det2(j.f_v, j.f_w, j.g_v, j.g_w);
  double d_gh_uv = det2(j.g_u, j.g_v, j.h_u, j.h_v);
  double d_fh = det2(j.f_v, j.f_w, j.h_v, j.h_w);
  double d_gh_uw = det2(j.g_u, j.g_w, j.h_u, j.h_w);

  ThreeSpeciesCheck out;
  out.first_expression = d_fg * d_gh_uv + d_fh * d_gh_uw;
  out.second_expression =
      (j.h_u * d_gh_uw + j.g_u * d_gh_uv) * (j.f_v * d_fg + j.f_w * d_fh);
  out.determinant_conditions = out.first_expression > 0 && out.second_expression > 0;

  out.reduction = check_quadratic_reduction(derive_quadratic_form(j));
  if (out.reduction.verdict != Verdict::Indeterminate)
    out.agrees_with_reduction =
        out.determinant_conditions == (out.reduction.verdict == Verdict::Herglotz);
  return out;
}

Eigen::MatrixXd schur_reduce(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                             const Eigen::MatrixXd& C, double lambda, double singular_tol) {
  const auto n = A.rows();
  const auto m = C.rows();
  if (A.cols() != n || C.cols() != m || B.rows() != n || B.cols() != m)
    throw ValidationError("schur_reduce: incompatible block dimensions");

  Eigen::MatrixXd shifted = C - lambda * Eigen::MatrixXd::Identity(m, m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
  if (svd.singularValues().minCoeff() <= singular_tol * scale)
    throw NumericalError("schur_reduce: lambda is in the spectrum of C");

  return A - lambda * Eigen::MatrixXd::Identity(n, n) - B * svd.solve(B.transpose());
}

}  // namespace hpencil::herglotz
