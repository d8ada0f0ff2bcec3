#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "hpencil/field.hpp"

namespace hpencil::pencil {

/// Robin data b0*u + b1*u' = 0 at an endpoint; (b0,b1) != (0,0).
struct BoundaryCondition {
  double b0 = 1;
  double b1 = 0;

  static BoundaryCondition dirichlet() { return {1, 0}; }
  static BoundaryCondition neumann() { return {0, 1}; }
  bool is_dirichlet() const { return b1 == 0; }
  bool is_neumann() const { return b0 == 0; }
  void validate() const;
};

/// One rational term W_i(x) / (lambda - alpha_i) with W_i > 0 on [a,b].
struct PoleTerm {
  double alpha;
  coeffs::CoefficientField weight;
};

/// The rational Sturm-Liouville pencil
///   -(D(x) p')' = [ lambda*W0(x) - sum_i W_i(x)/(lambda - alpha_i) - V(x) ] p
/// on [a,b] with Robin conditions at both ends. D, W0, W_i > 0 (checked at
/// discretization samples). Interval I_j = (alpha_j, alpha_{j+1}) with
/// alpha_0 = -inf and alpha_{N+1} = +inf.
struct PencilProblem {
  double a = 0;
  double b = 1;
  coeffs::CoefficientField D;
  coeffs::CoefficientField V;
  coeffs::CoefficientField W0;
  std::vector<PoleTerm> poles;
  BoundaryCondition bc_left;
  BoundaryCondition bc_right;

  int pole_count() const { return static_cast<int>(poles.size()); }
  std::vector<double> pole_locations() const;

  /// lambda-range of interval I_j; j in [0, pole_count()].
  double interval_lower(int j) const;
  double interval_upper(int j) const;

  /// g(x, lambda); throws EvalError when lambda equals a pole.
  double g(double x, double lambda) const;

  /// Structural checks (domain order, pole ordering, boundary data).
  void validate() const;
};

/// Uniform grid with spacing dx = (b-a)/n_x and interior points
/// x_i = a + i*dx, i = 1..n_x-1. n_x >= 4 (one-sided boundary stencils).
struct DiscreteGrid {
  double a = 0;
  double b = 1;
  int n_x = 4;

  DiscreteGrid(double a_, double b_, int n_x_);
  DiscreteGrid(const PencilProblem& p, int n_x_) : DiscreteGrid(p.a, p.b, n_x_) {}

  double dx() const { return (b - a) / n_x; }
  double x(int i) const { return a + dx() * i; }
  double x_half(int i) const { return a + dx() * (i + 0.5); }  // x_{i+1/2}
  int interior_count() const { return n_x - 1; }
};

/// One accepted eigenpair of the discretized pencil.
struct EigenPair {
  double lambda = 0;
  int interval_index = 0;     // j with alpha_j < lambda < alpha_{j+1}
  int oscillation_count = 0;  // sign changes of u over interior points
  Eigen::VectorXd u;          // interior values, max-norm 1, first sign +
  std::vector<Eigen::VectorXd> v;  // auxiliary blocks, same scaling as u
  double imag_magnitude = 0;  // |Im| of the raw computed eigenvalue
  double residual = 0;        // max_i ||v_i - W_i u/(lambda-alpha_i)||_inf
  bool near_pole = false;
};

struct SpectrumResult {
  PencilProblem problem;
  DiscreteGrid grid;
  double reality_tol = 0;
  std::vector<EigenPair> pairs;  // sorted by (interval_index, lambda)
  std::vector<std::complex<double>> discarded;  // non-real raw eigenvalues

  /// Eigenpairs belonging to interval j, in ascending lambda order.
  std::vector<const EigenPair*> interval(int j) const;
};

/// Interior stencil rows of  (-(D u')')_i + V_i u_i  with the boundary
/// unknowns eliminated through the second-order one-sided stencils, plus
/// interior samples of W0 and the pole weights. This is the single source
/// of stencils for the dense linearization, the bisection fast path and the
/// weighted reproduction-number problem.
struct UBlock {
  Eigen::VectorXd lower, diag, upper;  // row i couples u_{i-1}, u_i, u_{i+1}
  Eigen::VectorXd w0;                  // W0 at interior points
  std::vector<Eigen::VectorXd> w;      // W_i at interior points
  std::vector<double> alphas;
  // u_0 = cl1*u_1 + cl2*u_2 and u_n = cr1*u_{n-1} + cr2*u_{n-2}
  double cl1 = 0, cl2 = 0, cr1 = 0, cr2 = 0;
};

UBlock assemble_u_block(const PencilProblem& p, const DiscreteGrid& g);

/// Dense matrix of the auxiliary-function linearization, size
/// (N+1)(n_x - 1). The u rows are divided by W0 so the result is a
/// standard eigenproblem.
Eigen::MatrixXd assemble_linearization(const PencilProblem& p, const DiscreteGrid& g);

/// Full dense eigensolve with interval classification and oscillation
/// indexing. Eigenvalues with |Im| <= reality_tol*max(1,|Re|) are accepted;
/// if more than 1% of the raw eigenvalues fail that test the whole solve is
/// rejected as a reality violation.
SpectrumResult solve_spectrum(const PencilProblem& p, const DiscreteGrid& g,
                              double reality_tol = 1e-8);

/// Sign changes of u after zeroing entries below 1e-10 * max-norm.
/// Throws on an all-zero vector.
int count_sign_changes(const Eigen::VectorXd& u);

/// Index j with alpha_j < lambda < alpha_{j+1} (poles sorted ascending).
/// Throws when lambda sits on a pole to machine precision.
int classify_interval(double lambda, const std::vector<double>& poles);

/// ||(discrete LHS)u - g(x,lambda) u||_inf / ||u||_inf with the assembly
/// stencils; u holds interior values.
double residual(const PencilProblem& p, const DiscreteGrid& g, double lambda,
                const Eigen::VectorXd& u);

/// Number of pencil eigenvalues strictly below `lambda`, valid for lambda
/// in I_0 (below every pole). O(n) Sturm count on the tridiagonal u-block.
int count_eigenvalues_below(const UBlock& ub, double lambda);

/// Smallest pencil eigenvalue (the k = 0 eigenvalue of I_0), located by
/// bisection on count_eigenvalues_below. Exact for the same discrete system
/// solve_spectrum sees, at O(n) cost per probe.
double leftmost_eigenvalue(const PencilProblem& p, const DiscreteGrid& g,
                           double rel_tol = 1e-13);

}  // namespace hpencil::pencil
