#include <cmath>

#include "doctest.h"
#include "fvklab/energy.hpp"
#include "fvklab/relaxed.hpp"

using namespace fvklab;

namespace {

ModelParams params(double h, double beta) {
  ModelParams p;
  p.h = h;
  p.beta = beta;
  p.alpha_s = beta == 2.0 ? 1e-6 : 1e-4;
  return p;
}

}  // namespace

TEST_CASE("closed-form u0 derivatives agree with finite differences") {
  const ModelParams p = params(1e-4, 1.0);
  const DerivedScales s = validate_and_derive(p);
  for (double r : {0.5 * s.r_h, 1.5 * s.r_h, 0.8}) {
    const double e = 1e-6;
    const double d1 = (closed_form_u0(r + e, p, s) - closed_form_u0(r - e, p, s)) / (2 * e);
    const double d2 =
        (closed_form_u0_prime(r + e, p, s) - closed_form_u0_prime(r - e, p, s)) / (2 * e);
    CHECK(closed_form_u0_prime(r, p, s) == doctest::Approx(d1).epsilon(1e-7));
    CHECK(closed_form_u0_second(r, p, s) == doctest::Approx(d2).epsilon(1e-5));
  }
}

TEST_CASE("relaxed profile wrinkles exactly beyond r_h") {
  const ModelParams p = params(1e-4, 1.0);
  const DerivedScales s = validate_and_derive(p);
  CHECK(gamma0(0.5 * s.r_h, p, s) <= 1e-15);
  CHECK(gamma0(1.1 * s.r_h, p, s) > 0.0);
  CHECK(std::abs(gamma0(s.r_h, p, s)) < 1e-12);
  for (double r = 0.01; r < p.r0; r += 0.01) CHECK(sigma0(r, p, s) >= 0.0);
  // Outside r_h the stress has the explicit 1/r form.
  for (double r : {0.5, 0.7, 0.9})
    CHECK(sigma0(r, p, s) == doctest::Approx(2 * s.p * (p.r0 / r - 1)).epsilon(1e-12));
}

TEST_CASE("closed form is a critical point of F0") {
  const ModelParams p = params(1e-4, 1.0);
  const DerivedScales s = validate_and_derive(p);
  auto grid = relaxed_grid(512, p, s);
  const double f = eval_F0(sample_u0(grid, p, s), p, s);
  const F0Solution sol = minimize_F0(p, s, grid, {}, InitialGuess::zero);
  CHECK(sol.energy <= f * (1 + 1e-10));
  CHECK(sol.energy == doctest::Approx(f).epsilon(1e-9));
}

TEST_CASE("relaxed two-field minimizer") {
  for (double beta : {1.0, 2.0}) {
    const ModelParams p = params(1e-5, beta);
    const DerivedScales s = validate_and_derive(p);
    const RelaxedSolution sol = minimize_Fh(p, s, relaxed_grid(1024, p, s));
    CHECK(sol.gap >= 0.0);
    CHECK(sol.gap < 1e3 * p.h * p.h);
    for (double sg : sol.sigma) CHECK(sg >= -1e-8);
    CHECK(sigma_outer_error(sol, p, s) < 1e-3);
  }
}

TEST_CASE("F0(u0) is h-independent at beta = 2") {
  auto f0 = [](double h) {
    const ModelParams p = params(h, 2.0);
    const DerivedScales s = validate_and_derive(p);
    return eval_F0(sample_u0(relaxed_grid(512, p, s), p, s), p, s);
  };
  CHECK(f0(1e-3) == doctest::Approx(f0(1e-5)).epsilon(1e-10));
}

TEST_CASE("Hermite profile evaluation") {
  const ModelParams p = params(1e-4, 1.0);
  const DerivedScales s = validate_and_derive(p);
  auto grid = relaxed_grid(256, p, s);
  const HermiteProfile hp = hermite_u0(*grid, p, s);
  double f, f1, f2;
  hp.eval(*grid, 0.6, f, f1, f2);
  CHECK(f == doctest::Approx(closed_form_u0(0.6, p, s)).epsilon(1e-8));
  CHECK(f1 == doctest::Approx(closed_form_u0_prime(0.6, p, s)).epsilon(1e-5));
  const RadialProfile rp = sample_u0(grid, p, s);
  CHECK(rp.at(0.6) == doctest::Approx(closed_form_u0(0.6, p, s)).epsilon(1e-9));
}
