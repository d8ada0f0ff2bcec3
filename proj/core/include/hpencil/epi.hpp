#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hpencil/field.hpp"
#include "hpencil/pencil.hpp"

namespace hpencil::epi {

/// Parameter bundle of the spatial fox-rabies model on the unit interval.
/// Rates are per year; K in foxes/km^2; D in km^2/year.
struct RabiesParams {
  double a = 0;      // average birth rate
  double b = 0;      // average death rate (inert in the linearization)
  double sigma = 0;  // inverse incubation period
  double K = 0;      // carrying capacity
  coeffs::CoefficientField alpha;  // inverse infectious period
  coeffs::CoefficientField beta;   // transmission coefficient
  coeffs::CoefficientField D;      // diffusion

  void validate() const;  // positive scalars; field positivity is checked at sampling
};

/// Distribute a total vaccine quantity c0 uniformly over [a0, a0 + L).
struct VaccineStrategy {
  double c0 = 0;
  double a0 = 0;
  double L = 1;

  void validate() const;  // c0 >= 0, L > 0, 0 <= a0, a0 + L <= 1
};

/// Stability pencil of the disease-free state in the lambda~ = -lambda
/// convention: D as given, W0 = 1, V = alpha(x) + a, one pole at
/// sigma + a with weight sigma*K*beta(x), Neumann at both ends.
/// A transmission field that is identically zero drops the pole term.
pencil::PencilProblem build_stability_pencil(const RabiesParams& rp);

/// Weighted problem behind the reproduction number: -(D phi')' +
/// (alpha+a) phi = mu * (sigma*K*beta/(sigma+a)) * phi with Neumann ends,
/// encoded as a pole-free pencil with W0 equal to the weight.
pencil::PencilProblem build_r0_problem(const RabiesParams& rp);

/// Principal growth rate lambda_0 = -min spectrum of the stability pencil;
/// positive means an initial infection spreads.
double principal_growth_rate(const RabiesParams& rp, int n_x);

/// R0 = 1 / mu_1 with mu_1 the principal eigenvalue of the weighted
/// problem. Throws ValidationError when the weight is not positive.
double reproduction_number(const RabiesParams& rp, int n_x);

struct SignConsistency {
  double lambda0 = 0;
  double r0 = 0;
  bool consistent = false;  // sign(lambda0) == sign(r0 - 1) within tolerance
};

/// Cross-check of the two stability indicators.
SignConsistency sign_consistency(const RabiesParams& rp, int n_x, double tol = 1e-9);

/// beta(x) / (1 + v0(x)) with v0 = c0/L on [a0, a0+L), 0 elsewhere.
coeffs::CoefficientField vaccine_beta(const coeffs::CoefficientField& beta_base,
                                      const VaccineStrategy& vs);

/// Copy of rp with the vaccinated transmission field.
RabiesParams with_vaccine(const RabiesParams& rp, const VaccineStrategy& vs);

struct SweepPoint {
  double a0 = 0;
  double L = 0;
  double lambda0 = 0;
  bool stable = false;  // lambda0 < 0
};

struct SweepResult {
  double c0 = 0;
  int n_x = 0;
  std::vector<SweepPoint> points;  // ordered by (a0, L)
  SweepPoint minimizer;
  /// lambda0 = 0 contour samples, linearly interpolated along grid lines.
  std::vector<std::pair<double, double>> boundary;
};

/// lambda_0 over the (a0, L) grid at fixed c0. Points violating
/// a0 + L <= 1 are skipped. Grid points are evaluated concurrently;
/// the result ordering is deterministic.
SweepResult vaccine_sweep(const RabiesParams& rp, double c0,
                          const std::vector<double>& a0_grid,
                          const std::vector<double>& L_grid, int n_x);

enum class HeterogeneityKind { BetaC1, AlphaC2, DiffusionD0, DiffusionC3 };

struct HeterogeneityRow {
  double value = 0;  // swept parameter (c1, c2, D0 or c3)
  double r0 = 0;
};

struct HeterogeneityResult {
  HeterogeneityKind kind;
  std::vector<HeterogeneityRow> rows;
  bool property_holds = false;  // min at 0 for A-panels; constant R0 for B/C
  std::string property;
};

/// Fig.-3 style experiments on R0 versus spatial heterogeneity. Parameter
/// recipes: beta = 0.2192(1 + c1 cos(pi x)); alpha = 0.2(1 + c2 cos(pi x));
/// D = D0 (1 + cos(pi x)) with mean-preserving alpha = 2/pi;
/// D = 0.0685 (1 + c3 cos(pi x)).
HeterogeneityResult heterogeneity_experiment(HeterogeneityKind kind,
                                             const std::vector<double>& values, int n_x);

}  // namespace hpencil::epi
