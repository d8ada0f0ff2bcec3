#include <doctest.h>

#include <cmath>

#include "hpencil/errors.hpp"
#include "hpencil/pencil.hpp"
#include "hpencil/presets.hpp"
#include "hpencil/prufer.hpp"

using namespace hpencil;
using namespace hpencil::pencil;
using namespace hpencil::prufer;

namespace {

PencilProblem free_problem(double a, double b, BoundaryCondition bc) {
  PencilProblem p;
  p.a = a;
  p.b = b;
  p.D = coeffs::CoefficientField::constant(1, a, b);
  p.V = coeffs::CoefficientField::constant(0, a, b);
  p.W0 = coeffs::CoefficientField::constant(1, a, b);
  p.bc_left = bc;
  p.bc_right = bc;
  return p;
}

}  // namespace

TEST_CASE("boundary angles") {
  CHECK(initial_angle(BoundaryCondition::neumann()) == doctest::Approx(0.0));
  CHECK(initial_angle(BoundaryCondition::dirichlet()) == doctest::Approx(M_PI / 2));
  CHECK(initial_angle({1, 1}) == doctest::Approx(-M_PI / 4));
  CHECK(target_angle(BoundaryCondition::neumann()) == doctest::Approx(0.0));
  CHECK(target_angle(BoundaryCondition::dirichlet()) == doctest::Approx(-M_PI / 2));
  // scaling the condition must not change either convention
  CHECK(initial_angle({-2, 0}) == doctest::Approx(M_PI / 2));
  CHECK(target_angle({0, -3}) == doctest::Approx(0.0));
}

TEST_CASE("flat Neumann solution stays at angle zero") {
  PencilProblem p = free_problem(0, 1, BoundaryCondition::neumann());
  auto r = integrate_prufer(p, 0.0);
  CHECK(r.theta_b == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.crossings == 0);
}

TEST_CASE("Dirichlet ground state on (0,1): half turn, no interior roots") {
  PencilProblem p = free_problem(0, 1, BoundaryCondition::dirichlet());
  auto r = integrate_prufer(p, M_PI * M_PI);
  CHECK(r.theta_b == doctest::Approx(-M_PI / 2).epsilon(1e-7));
  CHECK(r.crossings == 0);
}

TEST_CASE("closed-form check: theta for sin(m x) modes and root counts") {
  PencilProblem p = free_problem(0, M_PI, BoundaryCondition::dirichlet());
  for (int m = 1; m <= 4; ++m) {
    auto r = integrate_prufer(p, static_cast<double>(m) * m);
    CHECK(r.theta_b == doctest::Approx(M_PI / 2 - m * M_PI).epsilon(1e-7));
    CHECK(r.crossings == m - 1);
  }
}

TEST_CASE("example39: angle at the table eigenvalue and near-pole refusal") {
  PencilProblem p = presets::example39();
  double target_k1 = target_angle(p.bc_right) - M_PI;  // -3pi/2
  auto r = integrate_prufer(p, 4.88);
  CHECK(std::abs(r.theta_b - target_k1) < 2e-2);
  CHECK_THROWS_AS(integrate_prufer(p, 2.0 + 1e-9), NumericalError);
}

TEST_CASE("shoot_eigenvalue: free Dirichlet problem") {
  PencilProblem p = free_problem(0, M_PI, BoundaryCondition::dirichlet());
  auto r = shoot_eigenvalue(p, 0, 0, 1e-10);
  CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.crossings == 0);
  auto r3 = shoot_eigenvalue(p, 0, 3, 1e-10);
  CHECK(r3.lambda == doctest::Approx(16.0).epsilon(1e-6));
}

TEST_CASE("shoot_eigenvalue: example39 table entries") {
  PencilProblem p = presets::example39();
  auto j1k1 = shoot_eigenvalue(p, 1, 1, 1e-9);
  CHECK(std::abs(j1k1.lambda - 4.88) <= 0.05);  // continuum value 4.9176
  CHECK(j1k1.crossings == 1);
  auto j0k0 = shoot_eigenvalue(p, 0, 0, 1e-9);
  CHECK(std::abs(j0k0.lambda - 1.22) <= 0.02);
  CHECK(j0k0.lambda > p.interval_lower(0));
  CHECK(j0k0.lambda < p.interval_upper(0));

  // n_x-free shooting against the n_x = 200 linearization
  DiscreteGrid g(p, 200);
  auto spec = solve_spectrum(p, g);
  auto i0 = spec.interval(0);
  auto i1 = spec.interval(1);
  for (int k = 0; k <= 2; ++k) {
    auto s0 = shoot_eigenvalue(p, 0, k, 1e-9);
    auto s1 = shoot_eigenvalue(p, 1, k, 1e-9);
    CHECK(std::abs(s0.lambda - i0[k]->lambda) <=
          5e-3 * std::max(1.0, std::abs(s0.lambda)));
    CHECK(std::abs(s1.lambda - i1[k]->lambda) <=
          5e-3 * std::max(1.0, std::abs(s1.lambda)));
    CHECK(s0.crossings == count_sign_changes(i0[k]->u));
    CHECK(s1.crossings == count_sign_changes(i1[k]->u));
  }
}

TEST_CASE("monotone decrease of the terminal angle in lambda") {
  PencilProblem p = presets::example39();
  for (int j = 0; j <= 1; ++j) {
    double lo = j == 0 ? 0.2 : 2.2;
    double hi = j == 0 ? 1.95 : 30.0;
    double prev = integrate_prufer(p, lo).theta_b;
    for (int s = 1; s < 20; ++s) {
      double lam = lo + (hi - lo) * s / 19.0;
      double cur = integrate_prufer(p, lam).theta_b;
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("robin conditions shoot consistently with the linearization") {
  PencilProblem p = free_problem(0, 1, BoundaryCondition{1.0, 0.8});
  p.V = coeffs::CoefficientField::from_source("0.4 + 0.3*cos(3*x)", 0, 1);
  DiscreteGrid g(p, 400);
  auto spec = solve_spectrum(p, g);
  for (int k = 0; k <= 2; ++k) {
    auto s = shoot_eigenvalue(p, 0, k, 1e-10);
    CHECK(std::abs(s.lambda - spec.pairs[static_cast<std::size_t>(k)].lambda) <=
          2e-3 * std::max(1.0, std::abs(s.lambda)));
  }
}

TEST_CASE("input validation") {
  PencilProblem p = presets::example39();
  CHECK_THROWS_AS(shoot_eigenvalue(p, 2, 0, 1e-9), ValidationError);
  CHECK_THROWS_AS(shoot_eigenvalue(p, -1, 0, 1e-9), ValidationError);
  CHECK_THROWS_AS(shoot_eigenvalue(p, 0, -2, 1e-9), ValidationError);
}
