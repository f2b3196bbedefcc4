#include <cmath>

#include "doctest.h"
#include "fvklab/energy.hpp"
#include "fvklab/errors.hpp"
#include "support.hpp"

using namespace fvklab;
using fvklab::test::Rng;

namespace {

// Energy integrand at one radius from theta samples of the jets.
double sampled_density(const SheetJet& J, double r, const ModelParams& p, int n) {
  const double h2 = p.h * p.h, sub = p.alpha_s * std::pow(p.h, -p.beta);
  return test::theta_mean(
      [&](double th) {
        const double ur = J.u_r.v.eval(th), ur_r = J.u_r.d1.eval(th);
        const double ur_t = test::eval_dtheta(J.u_r.v, th, 1);
        const double ut = J.u_theta.v.eval(th), ut_r = J.u_theta.d1.eval(th);
        const double ut_t = test::eval_dtheta(J.u_theta.v, th, 1);
        const double w = J.w.v.eval(th);
        const double xi_r = J.w.d1.eval(th) - r / p.R;
        const double xi_rr = J.w.d2.eval(th) - 1.0 / p.R;
        const double xi_t = test::eval_dtheta(J.w.v, th, 1);
        const double xi_tt = test::eval_dtheta(J.w.v, th, 2);
        const double xi_rt = test::eval_dtheta(J.w.d1, th, 1);
        const double a = ur_r + 0.5 * xi_r * xi_r;
        const double b = ut_t / r + ur / r + 0.5 * xi_t * xi_t / (r * r);
        const double c = ur_t / r + ut_r - ut / r + xi_r * xi_t / r;
        return a * a + b * b + 0.5 * c * c +
               h2 * (xi_tt * xi_tt / std::pow(r, 4) + xi_rr * xi_rr + 2.0 * xi_rt * xi_rt / (r * r)) +
               sub * w * w;
      },
      n);
}

}  // namespace

TEST_CASE("relaxed cost is C1 with a kink in curvature at -2p") {
  DerivedScales s;
  s.p = 0.3;
  const double e = 1e-9;
  CHECK(w_rel(-0.6 - e, s) == doctest::Approx(w_rel(-0.6 + e, s)).epsilon(1e-8));
  CHECK(w_rel_prime(-0.6 - e, s) == doctest::Approx(w_rel_prime(-0.6 + e, s)).epsilon(1e-7));
  CHECK(w_rel(0.2, s) == doctest::Approx(0.04));
  CHECK(w_rel(-1.0, s) == doctest::Approx(-4 * 0.3 * (0.3 - 1.0)));
}

TEST_CASE("W_r from its definition agrees with theta quadrature") {
  ModelParams p;
  p.h = 1e-2;
  p.alpha_s = 1e-3;
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const TrigSeries w = test::random_series(rng, 12, 0.05, rng.integer(1, 3));
    const double r = rng.uniform(0.2, 1.0), eta = rng.uniform(-0.05, 0.05);
    const double A = test::theta_mean(
        [&](double t) { return std::pow(test::eval_dtheta(w, t, 1), 2); }, 256) / (2 * r * r);
    const double bend = test::theta_mean(
        [&](double t) { return std::pow(test::eval_dtheta(w, t, 2), 2); }, 256);
    const double fl = test::theta_mean(
        [&](double t) { return std::pow(w.eval(t) - w.mean(), 2); }, 256);
    const double oracle = (eta + A) * (eta + A) + p.h * p.h * bend / std::pow(r, 4) +
                          p.alpha_s * std::pow(p.h, -p.beta) * fl;
    CHECK(w_r(eta, w, r, p) == doctest::Approx(oracle).epsilon(1e-11));
    CHECK(w_r_spectral(eta, w, r, p, derive_scales(p)) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("W_r never undercuts the relaxed cost") {
  ModelParams p;
  p.h = 1e-3;
  const DerivedScales s = derive_scales(p);
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const TrigSeries w = test::random_series(rng, 40, std::pow(10.0, rng.uniform(-5, -1)));
    const double r = rng.uniform(0.1, 1.0), eta = rng.uniform(-4 * s.p, 2 * s.p);
    CHECK(w_r(eta, w, r, p) - w_rel(eta, s) >= -1e-12);
  }
}

TEST_CASE("zero wrinkles give W_r = eta^2") {
  ModelParams p;
  CHECK(w_r(-0.3, TrigSeries(0.1), 0.5, p) == doctest::Approx(0.09));
}

TEST_CASE("energy density matches the sampled integrand and the decomposition") {
  ModelParams p;
  p.h = 3e-3;
  p.alpha_s = 2e-3;
  auto grid = std::make_shared<const RadialGrid>(build_grid(64, 1.0, GridScheme::composite_gauss));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SheetState st = test::random_state(seed, grid, 5, seed % 2 + 1);
    for (std::size_t node : {std::size_t{5}, std::size_t{40}}) {
      const double r = grid->nodes()[node];
      const SheetJet J = st.jet(node);
      const EnergyDensity d = energy_density(J, r, p);
      CHECK(d.total() == doctest::Approx(sampled_density(J, r, p, 128)).epsilon(1e-11));
      double rem = 0.0;
      for (double x : d.remainder) rem += x;
      CHECK(d.mean_part + d.wr + rem == doctest::Approx(d.total()).epsilon(1e-11));
    }
    const EnergyBreakdown e = full_energy(st, p, derive_scales(p));
    CHECK(e.identity_defect() < 1e-12);
    CHECK(e.b_profile.size() == grid->size());
  }
}

TEST_CASE("flat unstretched sheet on a curved substrate") {
  // u = 0, xi = -r^2/(2R): radial strain r^2/(2R^2), no hoop strain, no substrate cost.
  ModelParams p;
  p.R = 2.0;
  auto grid = std::make_shared<const RadialGrid>(build_grid(64, 1.0, GridScheme::composite_gauss));
  const SheetState st = SheetState::zeros(grid, 2);
  const EnergyBreakdown e = full_energy(st, p, derive_scales(p));
  const double mem = std::pow(p.r0, 6) / (4 * std::pow(p.R, 4) * 6);
  CHECK(e.membrane == doctest::Approx(mem).epsilon(1e-13));
  CHECK(e.bending == doctest::Approx(p.h * p.h / (p.R * p.R) * 0.5).epsilon(1e-13));
  CHECK(e.substrate == 0.0);
}
