#pragma once

#include <Eigen/Dense>

#include "hpencil/pencil.hpp"

namespace hpencil::wkb {

/// Phase count (1/pi) * integral over [a,b] of sqrt(g(x,lambda)/D(x)),
/// by adaptive Simpson quadrature to absolute tolerance quad_tol.
/// Throws NumericalError("outside WKB validity ...") when g(x, lambda) is
/// not positive across the domain.
double wkb_phase(const pencil::PencilProblem& p, double lambda, double quad_tol = 1e-9);

/// Lower edge of the validity region inside I_j: the lambda at which
/// min_x g(x, lambda) crosses zero (min g is strictly increasing in lambda).
double validity_threshold(const pencil::PencilProblem& p, int j);

/// Solve wkb_phase(lambda) = k inside the validity part of I_j; the phase
/// is strictly increasing there so the root is unique. k counts half-waves
/// of the approximate eigenfunction; k >= 1. Throws "k below WKB range"
/// when even the validity edge has a larger phase.
double wkb_eigenvalue(const pencil::PencilProblem& p, int j, int k, double tol = 1e-10,
                      double quad_tol = 1e-9);

/// Quantization integer approximating the eigenvalue with `oscillation_k`
/// interior roots: oscillation_k + 1 when both ends are Dirichlet, else
/// oscillation_k (integer-k quantization cannot express the quarter-wave
/// offset of mixed conditions, so those fall back to the Neumann count).
int quantization_index(const pencil::PencilProblem& p, int oscillation_k);

/// Constant C_i of the accumulation law lambda_k ~ alpha_i - C_i / k^2:
/// C_i = ((1/pi) * integral sqrt(W_i(x)/D(x)) dx)^2. i is 1-based.
double accumulation_constant(const pencil::PencilProblem& p, int i, double quad_tol = 1e-12);

/// Approximate eigenfunction cos(phase(x) + phi0) / (sqrt(D) g^(1/4))
/// sampled at the interior grid points and scaled to max-norm 1 with the
/// first significant entry positive. phi0 solves the left boundary
/// condition (0 for Neumann, -pi/2 for Dirichlet).
Eigen::VectorXd wkb_eigenfunction(const pencil::PencilProblem& p, double lambda,
                                  const pencil::DiscreteGrid& g, double quad_tol = 1e-9);

}  // namespace hpencil::wkb
