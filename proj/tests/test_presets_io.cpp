#include <doctest.h>

#include <cmath>

#include "hpencil/errors.hpp"
#include "hpencil/herglotz.hpp"
#include "hpencil/pencil.hpp"
#include "hpencil/presets.hpp"
#include "hpencil/prufer.hpp"

using namespace hpencil;
using namespace hpencil::presets;

TEST_CASE("preset names") {
  auto names = preset_names();
  REQUIRE(names.size() == 5);
  CHECK(names[0] == "example39");
  CHECK(names[4] == "rabies-vaccine");
}

TEST_CASE("example39 matches its defining data") {
  auto p = example39();
  CHECK(p.a == 0);
  CHECK(p.b == doctest::Approx(M_PI));
  CHECK(p.bc_left.is_dirichlet());
  CHECK(p.bc_right.is_dirichlet());
  REQUIRE(p.pole_count() == 1);
  CHECK(p.poles[0].alpha == 2.0);
  CHECK(p.poles[0].weight.eval(0.0) == doctest::Approx(1.2));
  CHECK(p.V.eval(M_PI / 2) == doctest::Approx(1.0));
  // g(x, lambda) = lambda - sin x - (0.2 + cos^2 x)/(lambda - 2)
  CHECK(p.g(M_PI / 2, 1.0) == doctest::Approx(1.0 - 1.0 + 0.2).epsilon(1e-12));
}

TEST_CASE("capasso pencil and sign condition") {
  CapassoParams cp;
  cp.a11 = 0.4;
  cp.a12 = 0.9;
  cp.a22 = 0.6;
  cp.d = 1.2;
  cp.gprime = coeffs::CoefficientField::from_source("1 + 0.5*tanh(x)", 0, 1);

  auto j = cp.jacobian_at(0.5);
  CHECK(herglotz::check_two_species(j));  // a12 * gprime > 0

  auto p = cp.pencil();
  CHECK(p.D.eval(0.5) == doctest::Approx(1.2));
  CHECK(p.V.eval(0.25) == doctest::Approx(0.4));
  REQUIRE(p.pole_count() == 1);
  CHECK(p.poles[0].alpha == doctest::Approx(0.6));
  CHECK(p.poles[0].weight.eval(0.5) ==
        doctest::Approx(0.9 * (1 + 0.5 * std::tanh(0.5))));

  // the sign-flipped pencil has a real, interval-indexed spectrum
  pencil::DiscreteGrid g(p, 80);
  auto spec = pencil::solve_spectrum(p, g);
  CHECK(spec.discarded.empty());
  auto s = prufer::shoot_eigenvalue(p, 0, 0, 1e-9);
  CHECK(std::abs(s.lambda - spec.interval(0)[0]->lambda) < 1e-3);

  CapassoParams bad = cp;
  bad.a12 = -1;
  CHECK_THROWS_AS(bad.pencil(), ValidationError);
}

TEST_CASE("morphogen Herglotz data and constant-profile pencil") {
  MorphogenParams mp;
  mp.f0 = 0.8;
  mp.g0 = 0.5;
  mp.h0 = 1.1;
  mp.abar = coeffs::CoefficientField::constant(0.4, 0, 1);

  auto q = mp.q_plus_lambda_at(0.3);
  CHECK(q.linear == 1.0);
  double P = 0.8 + 0.5 + 1.1 * 0.4;
  CHECK(q.poles.at(0).alpha == doctest::Approx(-P));
  CHECK(q.poles.at(0).residue > 0);
  CHECK(herglotz::is_herglotz_sampled(q, 400));

  auto p = mp.pencil();
  REQUIRE(p.pole_count() == 1);
  CHECK(p.poles[0].alpha == doctest::Approx(P));
  pencil::DiscreteGrid g(p, 60);
  auto spec = pencil::solve_spectrum(p, g);
  CHECK(spec.discarded.empty());

  // x-dependent profiles carry the pole with x: pointwise data fine,
  // pencil construction rejected
  MorphogenParams varying = mp;
  varying.abar = coeffs::CoefficientField::from_source("x", 0, 1);
  CHECK_NOTHROW(varying.q_plus_lambda_at(0.7));
  CHECK_THROWS_AS(varying.pencil(), ValidationError);
}

TEST_CASE("rabies presets carry the published constants") {
  auto f3 = rabies_fig3();
  CHECK(f3.a == doctest::Approx(0.0027));
  CHECK(f3.sigma == doctest::Approx(0.0357));
  CHECK(f3.K == doctest::Approx(0.98));
  CHECK(f3.alpha.eval(0.5) == doctest::Approx(0.2));
  CHECK(f3.beta.eval(0.5) == doctest::Approx(0.2192));
  CHECK(f3.D.eval(0.5) == doctest::Approx(0.1371));

  auto rv = rabies_vaccine();
  CHECK(rv.K == doctest::Approx(1.5));
  // transmission magnitude 0.2192 times the unit-mean profile 6x(1-x)
  CHECK(rv.beta.eval(0.5) == doctest::Approx(0.2192 * 1.5));
  CHECK(rv.beta.eval(0.25) == doctest::Approx(0.2192 * 6 * 0.25 * 0.75));
}
