#pragma once

#include <string>
#include <vector>

#include "hpencil/epi.hpp"
#include "hpencil/herglotz.hpp"
#include "hpencil/pencil.hpp"

namespace hpencil::presets {

/// Names accepted by the CLI: example39, capasso, morphogen, rabies-fig3,
/// rabies-vaccine.
std::vector<std::string> preset_names();

/// -u'' + sin(x) u = lambda u - (0.2 + cos^2 x)/(lambda - 2) u on (0, pi),
/// u(0) = u(pi) = 0: one pole at 2, Dirichlet at both ends.
pencil::PencilProblem example39();

/// Propagule-spread model: diffusing propagule density coupled to a static
/// infective class. In the sign-flipped spectral variable this is the
/// pencil D = d, V = a11, pole at a22 with weight a12 * gprime(x).
struct CapassoParams {
  double a11 = 1;
  double a12 = 1;
  double a22 = 1;
  double d = 1;
  coeffs::CoefficientField gprime;  // derivative of the infection response, > 0

  herglotz::TwoSpeciesJacobian jacobian_at(double x) const;
  pencil::PencilProblem pencil() const;  // [0,1], Neumann ends
};

/// Morphogen-gradient linearization. q(x, lambda) =
/// kappa(x) (lambda + g0)/(lambda + P(x)) with kappa = h0(f0+g0)/P and
/// P = f0 + g0 + h0*abar(x). The pencil form (sign-flipped variable) has a
/// pole at P, so an x-dependent abar has no fixed-pole representation:
/// pencil() demands a constant abar, while the pointwise Herglotz data
/// (q_plus_lambda_at) is available for any abar.
struct MorphogenParams {
  double f0 = 1;
  double g0 = 1;
  double h0 = 1;
  coeffs::CoefficientField abar;  // steady diffusing-morphogen profile, >= 0

  /// Q(x, .) = lambda + q(x, lambda) as a rational Herglotz function.
  herglotz::RationalHerglotz q_plus_lambda_at(double x) const;
  pencil::PencilProblem pencil() const;  // [0,1], Neumann left, Dirichlet right
};

/// Homogeneous parameter set of the reproduction-number experiments:
/// a = 0.0027, sigma = 0.0357, K = 0.98, alpha = 0.2, beta = 0.2192,
/// D = 0.1371.
epi::RabiesParams rabies_fig3();

/// Vaccine-study baseline: K = 1.5, beta = 6x(1-x), alpha = 0.2,
/// D = 0.1371, a = 0.0027, sigma = 0.0357.
epi::RabiesParams rabies_vaccine();

}  // namespace hpencil::presets
