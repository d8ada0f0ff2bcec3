#pragma once

#include <utility>

#include "hpencil/pencil.hpp"

namespace hpencil::prufer {

/// Angle/log-radius state of the polar change of variables
/// p = R cos(Theta), p' = R sin(Theta); rho = log R.
struct PruferState {
  double theta = 0;
  double log_radius = 0;
};

struct IntegrationResult {
  double theta_b = 0;      // angle at x = b
  double log_radius_b = 0;
  int crossings = 0;       // interior roots of p: downward passes of cos(Theta)=0
  int steps = 0;
};

/// Angle at x = a solving b0*cos(t) + b1*sin(t) = 0, reduced to (-pi/2, pi/2].
/// Neumann -> 0, Dirichlet -> pi/2.
double initial_angle(const pencil::BoundaryCondition& bc);

/// Right-end angle branch, reduced to [-pi/2, pi/2): eigenvalue targets are
/// target_angle(bc) - k*pi for k = 0, 1, ... along the decreasing homotopy.
/// Neumann -> 0, Dirichlet -> -pi/2.
double target_angle(const pencil::BoundaryCondition& bc);

/// Integrate the Prufer system across [a, b] at the given lambda:
///   Theta' = -sin^2(T) - (g/D) cos^2(T) - (D'/D) sin(T) cos(T)
///   rho'   = (1 - g/D) sin(T) cos(T) - (D'/D) sin^2(T)
/// with an adaptive Dormand-Prince 4(5) pair. Refuses lambda closer to a
/// pole than 1e-6 times the pole spread.
IntegrationResult integrate_prufer(const pencil::PencilProblem& p, double lambda,
                                   double rel_tol = 1e-9);

struct ShootResult {
  double lambda = 0;
  double theta_b = 0;
  int crossings = 0;
  int iterations = 0;
  std::pair<double, double> bracket{0, 0};
};

/// Locate the eigenvalue of interval I_j whose eigenfunction has k interior
/// roots: bracket by geometric approach to the interval ends (geometric
/// expansion for infinite ends), then bisect Theta(b, lambda) against the
/// k-th boundary target, relying on strict monotone decrease in lambda.
/// Converges to |d lambda| <= tol * max(1, |lambda|); verifies the crossing
/// count and throws NumericalError on mismatch.
ShootResult shoot_eigenvalue(const pencil::PencilProblem& p, int j, int k,
                             double tol = 1e-9, double rel_tol = 1e-9);

}  // namespace hpencil::prufer
