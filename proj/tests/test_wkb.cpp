#include <doctest.h>

#include <cmath>

#include "hpencil/errors.hpp"
#include "hpencil/pencil.hpp"
#include "hpencil/presets.hpp"
#include "hpencil/prufer.hpp"
#include "hpencil/wkb.hpp"

using namespace hpencil;
using namespace hpencil::pencil;
using namespace hpencil::wkb;

namespace {

PencilProblem flat(double a, double b, BoundaryCondition bc) {
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

// Trapezoid refinement, independent of the adaptive Simpson in the library.
template <typename F>
double trapz(F f, double a, double b, int n) {
  double acc = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) acc += f(a + (b - a) * i / n);
  return acc * (b - a) / n;
}

}  // namespace

TEST_CASE("phase on a constant problem") {
  PencilProblem p = flat(0, M_PI, BoundaryCondition::neumann());
  CHECK(wkb_phase(p, 4.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(wkb_phase(p, 9.0) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("example39 phases at the published WKB values") {
  PencilProblem p = presets::example39();
  CHECK(wkb_phase(p, 4.88) == doctest::Approx(2.0).epsilon(5e-3));
  CHECK(wkb_phase(p, 9.73) == doctest::Approx(3.0).epsilon(5e-3));
  CHECK(wkb_phase(p, 1.773) == doctest::Approx(2.0).epsilon(5e-3));
  CHECK(wkb_phase(p, 1.029) == doctest::Approx(1.0).epsilon(5e-3));

  // g(x, 1.0) >= 0.2 > 0, so lambda = 1 is inside the validity region;
  // the region's lower edge in I_0 solves lambda^2 - 3 lambda + 1.8 = 0.
  CHECK_NOTHROW(wkb_phase(p, 1.0));
  CHECK_THROWS_AS(wkb_phase(p, 0.5), NumericalError);
  double edge = validity_threshold(p, 0);
  CHECK(edge == doctest::Approx((3 - std::sqrt(1.8)) / 2).epsilon(1e-6));
}

TEST_CASE("wkb_eigenvalue: constant problem is exact") {
  PencilProblem p = flat(0, M_PI, BoundaryCondition::neumann());
  for (int k = 1; k <= 4; ++k)
    CHECK(wkb_eigenvalue(p, 0, k, 1e-12) == doctest::Approx(k * k).epsilon(1e-9));
}

TEST_CASE("wkb_eigenvalue: example39 published rows") {
  PencilProblem p = presets::example39();
  // interval I_0: phase integers 1..5 give the published column k = 0..4
  const double row0[5] = {1.029, 1.773, 1.916, 1.956, 1.973};
  for (int m = 1; m <= 5; ++m)
    CHECK(std::abs(wkb_eigenvalue(p, 0, m, 1e-10) - row0[m - 1]) <= 0.005);
  const double row1[5] = {2.68, 4.88, 9.73, 16.69, 25.67};
  for (int m = 1; m <= 5; ++m)
    CHECK(std::abs(wkb_eigenvalue(p, 1, m, 1e-10) - row1[m - 1]) <= 0.01);

  CHECK(quantization_index(p, 1) == 2);  // doubly-Dirichlet offset
  CHECK(quantization_index(flat(0, 1, BoundaryCondition::neumann()), 1) == 1);

  // A long oscillatory well: at the validity edge lambda = 10 the phase is
  // already about 40, so k = 1 has no solution and must be rejected.
  PencilProblem deep = flat(0, 20 * M_PI, BoundaryCondition::dirichlet());
  deep.V = coeffs::CoefficientField::from_source("5*(1+cos(x))", 0, 20 * M_PI);
  try {
    wkb_eigenvalue(deep, 0, 1, 1e-10);
    FAIL("expected k-below-range rejection");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("k below WKB range") != std::string::npos);
  }
}

TEST_CASE("accumulation constants") {
  PencilProblem p = presets::example39();
  double c = accumulation_constant(p, 1);
  // independent quadrature of (1/pi * int sqrt(0.2 + cos^2 x))^2
  auto f = [](double x) { return std::sqrt(0.2 + std::cos(x) * std::cos(x)); };
  double ref = trapz(f, 0, M_PI, 200000) / M_PI;
  CHECK(c == doctest::Approx(ref * ref).epsilon(1e-8));
  CHECK(std::abs(c - 0.649) < 2e-3);  // the published rounded constant

  PencilProblem q = flat(0, M_PI, BoundaryCondition::neumann());
  q.poles.push_back({1.0, q.D});
  CHECK(accumulation_constant(q, 1) == doctest::Approx(1.0).epsilon(1e-10));
  PencilProblem r = flat(0, M_PI, BoundaryCondition::neumann());
  r.poles.push_back({1.0, coeffs::CoefficientField::constant(4, 0, M_PI)});
  CHECK(accumulation_constant(r, 1) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK_THROWS_AS(accumulation_constant(r, 2), ValidationError);
}

TEST_CASE("phase is strictly increasing in lambda") {
  PencilProblem p = presets::example39();
  for (int j = 0; j <= 1; ++j) {
    double lo = validity_threshold(p, j) + 1e-3;
    double hi = j == 0 ? 1.999 : 40.0;
    double prev = wkb_phase(p, lo);
    for (int s = 1; s < 20; ++s) {
      double lam = lo + (hi - lo) * s / 19.0;
      double cur = wkb_phase(p, lam);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("wkb eigenfunction: cosine modes and oscillation counts") {
  PencilProblem p = flat(0, M_PI, BoundaryCondition::neumann());
  DiscreteGrid g(p, 64);
  for (int k = 1; k <= 3; ++k) {
    Eigen::VectorXd u = wkb_eigenfunction(p, k * k, g);
    CHECK(u.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    // proportional to cos(kx); normalize the reference the same way
    Eigen::VectorXd ref(g.interior_count());
    for (int i = 0; i < g.interior_count(); ++i) ref(i) = std::cos(k * g.x(i + 1));
    ref /= ref.cwiseAbs().maxCoeff();
    CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-6);
  }

  PencilProblem e39 = presets::example39();
  DiscreteGrid ge(e39, 100);
  double lam = wkb_eigenvalue(e39, 1, 5, 1e-10);  // oscillation index 4
  Eigen::VectorXd w = wkb_eigenfunction(e39, lam, ge);
  CHECK(count_sign_changes(w) == 4);

  auto spec = solve_spectrum(e39, ge);
  auto i1 = spec.interval(1);
  const Eigen::VectorXd& u14 = i1[4]->u;
  double corr = w.dot(u14) / (w.norm() * u14.norm());
  CHECK(corr > 0.95);
}

TEST_CASE("validity error reporting") {
  PencilProblem p = presets::example39();
  DiscreteGrid g(p, 50);
  CHECK_THROWS_AS(wkb_eigenfunction(p, 0.5, g), NumericalError);
  CHECK_THROWS_AS(wkb_eigenvalue(p, 0, 0, 1e-9), ValidationError);
}
