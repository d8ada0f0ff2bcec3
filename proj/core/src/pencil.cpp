#include "hpencil/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hpencil/errors.hpp"

namespace hpencil::pencil {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void BoundaryCondition::validate() const {
  if (b0 == 0 && b1 == 0)
    throw ValidationError("boundary condition (b0, b1) must not be (0, 0)");
  if (!std::isfinite(b0) || !std::isfinite(b1))
    throw ValidationError("boundary condition entries must be finite");
}

std::vector<double> PencilProblem::pole_locations() const {
  std::vector<double> out;
  out.reserve(poles.size());
  for (const auto& p : poles) out.push_back(p.alpha);
  return out;
}

double PencilProblem::interval_lower(int j) const {
  if (j < 0 || j > pole_count()) throw ValidationError("interval index out of range");
  return j == 0 ? -kInf : poles[static_cast<std::size_t>(j - 1)].alpha;
}

double PencilProblem::interval_upper(int j) const {
  if (j < 0 || j > pole_count()) throw ValidationError("interval index out of range");
  return j == pole_count() ? kInf : poles[static_cast<std::size_t>(j)].alpha;
}

double PencilProblem::g(double x, double lambda) const {
  double acc = lambda * W0.eval(x) - V.eval(x);
  for (const auto& p : poles) {
    double den = lambda - p.alpha;
    if (den == 0)
      throw EvalError("g(x, lambda) evaluated at pole alpha = " + std::to_string(p.alpha));
    acc -= p.weight.eval(x) / den;
  }
  return acc;
}

void PencilProblem::validate() const {
  if (!(a < b)) throw ValidationError("pencil domain requires a < b");
  bc_left.validate();
  bc_right.validate();
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!std::isfinite(poles[i].alpha))
      throw ValidationError("pole locations must be finite");
    if (i > 0 && !(poles[i - 1].alpha < poles[i].alpha))
      throw ValidationError("pole locations must be strictly increasing");
  }
}

DiscreteGrid::DiscreteGrid(double a_, double b_, int n_x_) : a(a_), b(b_), n_x(n_x_) {
  if (!(a < b)) throw ValidationError("grid requires a < b");
  if (n_x < 4) throw ValidationError("grid requires n_x >= 4 for the boundary stencils");
}

std::vector<const EigenPair*> SpectrumResult::interval(int j) const {
  std::vector<const EigenPair*> out;
  for (const auto& ep : pairs)
    if (ep.interval_index == j) out.push_back(&ep);
  return out;
}

namespace {

void require_positive(double value, const char* what, double x) {
  if (!(value > 0))
    throw ValidationError(std::string(what) + " must be positive; got " +
                          std::to_string(value) + " at x = " + std::to_string(x));
}

struct Elimination {
  double c1, c2;
};

// Solve b0*u_end + b1*u'_end = 0 with the one-sided second-order stencil
// for u'; gives u_end = c1*u_adjacent + c2*u_next_adjacent.
Elimination eliminate_left(const BoundaryCondition& bc, double dx) {
  // u'(a) ~ (-3u_0 + 4u_1 - u_2) / (2 dx)
  double den = 3 * bc.b1 - 2 * dx * bc.b0;
  if (std::abs(den) <= 1e-14 * (std::abs(3 * bc.b1) + std::abs(2 * dx * bc.b0)))
    throw ValidationError("singular boundary elimination at the left endpoint");
  return {4 * bc.b1 / den, -bc.b1 / den};
}

Elimination eliminate_right(const BoundaryCondition& bc, double dx) {
  // u'(b) ~ (3u_n - 4u_{n-1} + u_{n-2}) / (2 dx)
  double den = 3 * bc.b1 + 2 * dx * bc.b0;
  if (std::abs(den) <= 1e-14 * (std::abs(3 * bc.b1) + std::abs(2 * dx * bc.b0)))
    throw ValidationError("singular boundary elimination at the right endpoint");
  return {4 * bc.b1 / den, -bc.b1 / den};
}

Eigen::MatrixXd dense_from_ublock(const UBlock& ub) {
  const int n = static_cast<int>(ub.diag.size());
  const int nb = static_cast<int>(ub.w.size()) + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nb * n, nb * n);

  // u rows: (L u + V u + sum_k v^(k)) / W0 = lambda u.
  for (int r = 0; r < n; ++r) {
    double inv_w0 = 1.0 / ub.w0(r);
    M(r, r) = ub.diag(r) * inv_w0;
    if (r > 0) M(r, r - 1) = ub.lower(r) * inv_w0;
    if (r + 1 < n) M(r, r + 1) = ub.upper(r) * inv_w0;
    for (int k = 1; k < nb; ++k) M(r, k * n + r) = inv_w0;
  }
  // v rows: W_k u + alpha_k v^(k) = lambda v^(k).
  for (int k = 1; k < nb; ++k) {
    int off = k * n;
    for (int r = 0; r < n; ++r) {
      M(off + r, r) = ub.w[static_cast<std::size_t>(k - 1)](r);
      M(off + r, off + r) = ub.alphas[static_cast<std::size_t>(k - 1)];
    }
  }
  return M;
}

}  // namespace

UBlock assemble_u_block(const PencilProblem& p, const DiscreteGrid& g) {
  p.validate();
  if (g.a != p.a || g.b != p.b)
    throw ValidationError("grid domain does not match problem domain");
  const int n = g.interior_count();
  const double dx = g.dx();
  const double inv_dx2 = 1.0 / (dx * dx);

  UBlock ub;
  ub.lower = Eigen::VectorXd::Zero(n);
  ub.diag = Eigen::VectorXd::Zero(n);
  ub.upper = Eigen::VectorXd::Zero(n);
  ub.w0 = Eigen::VectorXd::Zero(n);
  ub.alphas = p.pole_locations();
  ub.w.assign(p.poles.size(), Eigen::VectorXd::Zero(n));

  // D at half-interval points x_{i+1/2}, i = 0..n_x-1.
  Eigen::VectorXd Dh(g.n_x);
  for (int i = 0; i < g.n_x; ++i) {
    double xh = g.x_half(i);
    Dh(i) = p.D.eval(xh);
    require_positive(Dh(i), "diffusion coefficient D", xh);
  }

  for (int i = 1; i <= n; ++i) {
    double xi = g.x(i);
    double dm = Dh(i - 1), dp = Dh(i);
    int r = i - 1;
    ub.diag(r) = (dm + dp) * inv_dx2 + p.V.eval(xi);
    if (i > 1) ub.lower(r) = -dm * inv_dx2;
    if (i < n) ub.upper(r) = -dp * inv_dx2;
    ub.w0(r) = p.W0.eval(xi);
    require_positive(ub.w0(r), "weight W0", xi);
    for (std::size_t k = 0; k < p.poles.size(); ++k) {
      ub.w[k](r) = p.poles[k].weight.eval(xi);
      require_positive(ub.w[k](r), "pole weight W", xi);
    }
  }

  Elimination left = eliminate_left(p.bc_left, dx);
  Elimination right = eliminate_right(p.bc_right, dx);
  ub.cl1 = left.c1;
  ub.cl2 = left.c2;
  ub.cr1 = right.c1;
  ub.cr2 = right.c2;
  // Fold u_0 = cl1 u_1 + cl2 u_2 into row 1 (u_0 enters with -D_{1/2}).
  ub.diag(0) += -Dh(0) * inv_dx2 * left.c1;
  if (n >= 2) ub.upper(0) += -Dh(0) * inv_dx2 * left.c2;
  // Mirror at the right end (u_n enters with -D_{n-1/2}).
  ub.diag(n - 1) += -Dh(g.n_x - 1) * inv_dx2 * right.c1;
  if (n >= 2) ub.lower(n - 1) += -Dh(g.n_x - 1) * inv_dx2 * right.c2;

  return ub;
}

Eigen::MatrixXd assemble_linearization(const PencilProblem& p, const DiscreteGrid& g) {
  return dense_from_ublock(assemble_u_block(p, g));
}

int count_sign_changes(const Eigen::VectorXd& u) {
  if (u.size() < 2) throw ValidationError("count_sign_changes needs >= 2 entries");
  double scale = u.cwiseAbs().maxCoeff();
  if (scale == 0) throw ValidationError("count_sign_changes on an all-zero vector");
  double floor = 1e-10 * scale;
  int count = 0;
  double prev = 0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double v = std::abs(u(i)) < floor ? 0.0 : u(i);
    if (v == 0) continue;
    if (prev != 0 && prev * v < 0) ++count;
    prev = v;
  }
  return count;
}

int classify_interval(double lambda, const std::vector<double>& poles) {
  for (double alpha : poles) {
    double tol = 4 * std::numeric_limits<double>::epsilon() *
                 std::max({1.0, std::abs(alpha), std::abs(lambda)});
    if (std::abs(lambda - alpha) <= tol)
      throw NumericalError("lambda coincides with pole alpha = " + std::to_string(alpha));
  }
  int j = 0;
  while (j < static_cast<int>(poles.size()) && lambda > poles[static_cast<std::size_t>(j)]) ++j;
  return j;
}

double residual(const PencilProblem& p, const DiscreteGrid& g, double lambda,
                const Eigen::VectorXd& u) {
  UBlock ub = assemble_u_block(p, g);
  const int n = g.interior_count();
  if (u.size() != n) throw ValidationError("residual: u has wrong size");
  double unorm = u.cwiseAbs().maxCoeff();
  if (unorm == 0) throw ValidationError("residual: u is zero");

  double rmax = 0;
  for (int r = 0; r < n; ++r) {
    // (L u)_r + V_r u_r - [lambda W0 - sum_k W_k/(lambda - alpha_k)] u_r
    double acc = ub.diag(r) * u(r);
    if (r > 0) acc += ub.lower(r) * u(r - 1);
    if (r + 1 < n) acc += ub.upper(r) * u(r + 1);
    double rational = lambda * ub.w0(r);
    for (std::size_t k = 0; k < ub.w.size(); ++k) {
      double den = lambda - ub.alphas[k];
      if (den == 0) throw EvalError("residual evaluated at a pole");
      rational -= ub.w[k](r) / den;
    }
    acc -= rational * u(r);
    rmax = std::max(rmax, std::abs(acc));
  }
  return rmax / unorm;
}

SpectrumResult solve_spectrum(const PencilProblem& p, const DiscreteGrid& g,
                              double reality_tol) {
  UBlock ub = assemble_u_block(p, g);
  Eigen::MatrixXd M = dense_from_ublock(ub);
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolve failed");

  const int n = g.interior_count();
  const int N = p.pole_count();
  const auto& values = es.eigenvalues();
  const auto& vectors = es.eigenvectors();
  const std::vector<double> alphas = p.pole_locations();

  SpectrumResult out{p, g, reality_tol, {}, {}};
  for (Eigen::Index idx = 0; idx < values.size(); ++idx) {
    std::complex<double> z = values(idx);
    double imag_mag = std::abs(z.imag());
    if (imag_mag > reality_tol * std::max(1.0, std::abs(z.real()))) {
      out.discarded.push_back(z);
      continue;
    }

    EigenPair ep;
    ep.lambda = z.real();
    ep.imag_magnitude = imag_mag;
    for (double alpha : alphas)
      if (std::abs(ep.lambda - alpha) < 1e3 * reality_tol) ep.near_pole = true;
    try {
      ep.interval_index = classify_interval(ep.lambda, alphas);
    } catch (const NumericalError&) {
      // Sitting on a pole to machine precision: an artifact of the
      // accumulating cluster, not a usable eigenpair.
      out.discarded.push_back(z);
      continue;
    }

    // Remove the arbitrary complex phase, then take real parts.
    Eigen::VectorXcd col = vectors.col(idx);
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    Eigen::VectorXd full = (col / (col(imax) / std::abs(col(imax)))).real();

    ep.u = full.head(n);
    for (int k = 0; k < N; ++k) ep.v.push_back(full.segment((k + 1) * n, n));

    double umax = ep.u.cwiseAbs().maxCoeff();
    if (umax == 0) {
      // Eigenvector lives entirely in the auxiliary blocks; only possible in
      // the ill-conditioned pole cluster.
      ep.near_pole = true;
      ep.oscillation_count = 0;
      ep.residual = std::numeric_limits<double>::infinity();
      out.pairs.push_back(std::move(ep));
      continue;
    }

    // Max-norm 1 with the first significant entry positive.
    double s = 1.0 / umax;
    for (Eigen::Index i = 0; i < ep.u.size(); ++i) {
      if (std::abs(ep.u(i)) >= 1e-10 * umax) {
        if (ep.u(i) < 0) s = -s;
        break;
      }
    }
    ep.u *= s;
    for (auto& vk : ep.v) vk *= s;

    ep.oscillation_count = count_sign_changes(ep.u);

    double res = 0;
    for (int k = 0; k < N; ++k) {
      double den = ep.lambda - alphas[static_cast<std::size_t>(k)];
      Eigen::VectorXd expect = ub.w[static_cast<std::size_t>(k)].cwiseProduct(ep.u) / den;
      res = std::max(res, (ep.v[static_cast<std::size_t>(k)] - expect).cwiseAbs().maxCoeff());
    }
    ep.residual = res;
    out.pairs.push_back(std::move(ep));
  }

  if (static_cast<double>(out.discarded.size()) >
      0.01 * static_cast<double>(values.size()))
    throw NumericalError("reality violated: " + std::to_string(out.discarded.size()) +
                         " of " + std::to_string(values.size()) +
                         " eigenvalues are non-real beyond tolerance");

  std::sort(out.pairs.begin(), out.pairs.end(), [](const EigenPair& x, const EigenPair& y) {
    if (x.interval_index != y.interval_index) return x.interval_index < y.interval_index;
    return x.lambda < y.lambda;
  });
  return out;
}

int count_eigenvalues_below(const UBlock& ub, double lambda) {
  const auto n = ub.diag.size();
  for (double alpha : ub.alphas)
    if (!(lambda < alpha))
      throw ValidationError("count_eigenvalues_below requires lambda below every pole");

  // Sturm/LDL pivot count for S(lambda) = L + diag(V) + diag(sum_k w_k /
  // (lambda - alpha_k)) - lambda diag(W0). With positive off-diagonal
  // products the matrix is diagonally similar to a symmetric tridiagonal
  // one, so the number of negative pivots equals the number of eigenvalues
  // of S below zero; each corresponds to one pencil eigenvalue below lambda
  // because every eigenvalue curve of S is strictly decreasing in lambda.
  int count = 0;
  double prev = 1;
  for (Eigen::Index r = 0; r < n; ++r) {
    double d = ub.diag(r) - lambda * ub.w0(r);
    for (std::size_t k = 0; k < ub.w.size(); ++k)
      d += ub.w[k](r) / (lambda - ub.alphas[k]);
    if (r > 0) {
      double offprod = ub.lower(r) * ub.upper(r - 1);
      if (!(offprod > 0))
        throw NumericalError("Sturm count needs positive off-diagonal products");
      d -= offprod / prev;
    }
    if (d == 0) d = -std::numeric_limits<double>::min();
    if (d < 0) ++count;
    prev = d;
  }
  return count;
}

double leftmost_eigenvalue(const PencilProblem& p, const DiscreteGrid& g, double rel_tol) {
  UBlock ub = assemble_u_block(p, g);
  const bool has_pole = !ub.alphas.empty();
  const double alpha1 = has_pole ? ub.alphas.front() : 0.0;
  const double scale = std::max(1.0, ub.diag.cwiseAbs().maxCoeff());

  double anchor = has_pole ? alpha1 : 0.0;
  double lo = anchor - scale;
  while (count_eigenvalues_below(ub, lo) > 0) {
    lo = anchor - 2 * (anchor - lo);
    if (!std::isfinite(lo)) throw NumericalError("leftmost_eigenvalue: no lower bound");
  }

  double hi;
  if (has_pole) {
    // Approach the pole from below until the first eigenvalue is bracketed.
    double step = 1e-3 * std::max(1.0, std::abs(alpha1));
    hi = alpha1 - step;
    while (hi <= lo || count_eigenvalues_below(ub, hi) < 1) {
      step *= 0.5;
      hi = alpha1 - step;
      if (step < 1e-300) throw NumericalError("leftmost_eigenvalue: bracket not found");
    }
  } else {
    hi = lo + scale;
    while (count_eigenvalues_below(ub, hi) < 1) {
      hi = lo + 2 * (hi - lo);
      if (!std::isfinite(hi)) throw NumericalError("leftmost_eigenvalue: no upper bound");
    }
  }

  while (hi - lo > rel_tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (count_eigenvalues_below(ub, mid) < 1 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hpencil::pencil
