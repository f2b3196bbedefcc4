#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"
#include "fvklab/energy.hpp"
#include "fvklab/errors.hpp"
#include "fvklab/scalelab.hpp"
#include "support.hpp"

using namespace fvklab;

namespace {

ModelParams lemma_params(double h = 1e-3) {
  ModelParams p;
  p.h = h;
  p.beta = 1.0;
  p.alpha_s = 1e-4;
  return p;
}

// W_r - W_rel at one radius from theta samples.
double sampled_excess(const TrigSeries& w, double eta, double r, const ModelParams& p,
                      const DerivedScales& s, int n) {
  const double A = test::theta_mean(
      [&](double t) { return std::pow(test::eval_dtheta(w, t, 1), 2); }, n) / (2 * r * r);
  const double bend = test::theta_mean(
      [&](double t) { return std::pow(test::eval_dtheta(w, t, 2), 2); }, n);
  const double fl = test::theta_mean([&](double t) { return std::pow(w.eval(t) - w.mean(), 2); }, n);
  const double wr = (eta + A) * (eta + A) + p.h * p.h * bend / std::pow(r, 4) +
                    p.alpha_s * std::pow(p.h, -p.beta) * fl;
  return wr - w_rel(eta, s);
}

// Interval averages of B and B^2 with a Kronrod rule on each element (exact
// for the element-local polynomial interpolant).
std::pair<double, double> sampled_b_means(const AngularField& w, double a, double b, int n) {
  std::vector<double> cuts{a};
  for (double x : w.grid()->breakpoints())
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]), half = 0.5 * (cuts[i + 1] - cuts[i]);
    const auto& x = GK::abscissa();
    const auto& wt = GK::weights();
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (double sign : {1.0, -1.0}) {
        if (j == 0 && sign < 0) continue;
        const TrigSeries d = w.jet_at(mid + sign * half * x[j]).d1;
        const double B = test::theta_mean([&](double t) { return std::pow(d.eval(t), 2); }, n);
        s1 += half * wt[j] * B;
        s2 += half * wt[j] * B * B;
      }
    }
  }
  return {s1 / (b - a), s2 / (b - a)};
}

}  // namespace

TEST_CASE("power-law fits") {
  std::vector<std::pair<double, double>> pts;
  for (double h : log_space(1e-8, 1e-2, 7)) pts.emplace_back(h, 3.0 * std::pow(h, 1.5));
  PowerFit f = fit_powerlaw(pts);
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.residual < 1e-12);

  for (auto& [h, v] : pts) v = 2.0;
  CHECK(std::abs(fit_powerlaw(pts).slope) < 1e-12);

  for (auto& [h, v] : pts) v = h * std::log(1.0 / h);
  f = fit_powerlaw(pts);
  CHECK(f.slope > 0.88);
  CHECK(f.slope < 1.0);
  CHECK(f.residual > 1e-3);
  const PowerFit g = fit_powerlaw(pts, FitModel::power_log);
  CHECK(g.slope == doctest::Approx(1.0).epsilon(0.01));
  CHECK(g.log_coeff == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(g.residual < 1e-10);
}

TEST_CASE("degenerate fits are rejected") {
  CHECK_THROWS_AS(fit_powerlaw({{1e-3, 1.0}, {1e-2, -1.0}, {1e-1, 2.0}}), FitError);
  CHECK_THROWS_AS(fit_powerlaw({{1e-3, 1.0}}), FitError);
  CHECK_THROWS_AS(fit_powerlaw({{1e-3, 1.0}, {1e-2, 2.0}}, FitModel::power_log),
                  FitError);
}

TEST_CASE("log-spaced values") {
  const auto v = log_space(1e-6, 1e-2, 5);
  REQUIRE(v.size() == 5);
  CHECK(v.front() == doctest::Approx(1e-6));
  CHECK(v[2] == doctest::Approx(1e-4));
  CHECK(v.back() == doctest::Approx(1e-2));
}

TEST_CASE("unwrinkled input has lhs sum of (eta + 2p)^2") {
  const ModelParams p = lemma_params();
  const DerivedScales s = validate_and_derive(p);
  auto grid = std::make_shared<const RadialGrid>(build_grid(128, p.r0, GridScheme::composite_gauss));
  const AngularField w(grid, 4);
  RadialProfile ubar{grid, {}, {}, {}};
  for (double r : grid->nodes()) ubar.values.push_back(-r * (3 * s.p + 0.01 + 0.02 * r * r));
  const double rho0 = 0.7, rho1 = 0.8, de = 0.005;
  double expect = 0.0;
  for (double r : {rho0, rho1}) expect += std::pow(ubar.at(r) / r + 2 * s.p, 2);
  for (auto check : {lemma_ws, lemma_ws2}) {
    const LemmaCheckResult res = check(w, ubar, rho0, rho1, de, p, s);
    CHECK(res.lhs == doctest::Approx(expect).epsilon(1e-12));
    CHECK(res.margin == doctest::Approx(res.lhs - res.rhs));
  }
}

TEST_CASE("hypotheses are enforced") {
  const ModelParams p = lemma_params();
  const DerivedScales s = validate_and_derive(p);
  const double de = default_lemma_margin(p);
  CHECK(de == doctest::Approx(p.r0 * p.r0 / (72 * p.R * p.R) / 96));
  const RandomWrinkleField f = random_wrinkle_field(3, p, s, 0.6, 0.95, de);
  CHECK_THROWS_AS(lemma_ws(f.w, f.ubar, 0.8, 0.7, de, p, s), HypothesisError);
  CHECK_THROWS_AS(lemma_ws(f.w, f.ubar, 0.7, 1.2, de, p, s), HypothesisError);
  CHECK_THROWS_AS(lemma_ws2(f.w, f.ubar, 0.7, 0.8, -1.0, p, s), HypothesisError);
  RadialProfile flat = f.ubar;
  for (double& v : flat.values) v = 0.0;
  CHECK_THROWS_AS(lemma_ws(f.w, flat, 0.7, 0.8, de, p, s), HypothesisError);
}

TEST_CASE("random fields are reproducible and respect the band") {
  const ModelParams p = lemma_params();
  const DerivedScales s = validate_and_derive(p);
  const double de = default_lemma_margin(p);
  const RandomWrinkleField a = random_wrinkle_field(42, p, s, 2.0 / 3.0, 0.99, de);
  const RandomWrinkleField b = random_wrinkle_field(42, p, s, 2.0 / 3.0, 0.99, de);
  const RandomWrinkleField c = random_wrinkle_field(43, p, s, 2.0 / 3.0, 0.99, de);
  CHECK(a.digest == b.digest);
  CHECK(a.digest != c.digest);
  CHECK(lemma_ws(a.w, a.ubar, 0.7, 0.8, de, p, s).inputs_digest ==
        lemma_ws(b.w, b.ubar, 0.7, 0.8, de, p, s).inputs_digest);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomWrinkleField f = random_wrinkle_field(seed, p, s, 2.0 / 3.0, 0.99, de);
    CHECK(std::abs(f.band_center_offset) <= f.band_half_width);
    for (double r : {0.67, 0.8, 0.99}) CHECK(f.ubar.at(r) / r <= -2 * s.p - de);
  }
}

TEST_CASE("lemma left-hand sides agree with a sampled oracle") {
  const ModelParams p = lemma_params();
  const DerivedScales s = validate_and_derive(p);
  const double de = default_lemma_margin(p);
  test::Rng rng(9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomWrinkleField f = random_wrinkle_field(seed, p, s, 2.0 / 3.0, 0.99, de);
    const int n = static_cast<int>(2 * f.w.kmax() + 2);
    const double rho0 = rng.uniform(0.68, 0.8), rho1 = rho0 + rng.uniform(0.01, 0.06);
    double wr = 0.0;
    for (double r : {rho0, rho1}) wr += sampled_excess(f.w.jet_at(r).v, f.ubar.at(r) / r, r, p, s, n);
    const LemmaCheckResult a = lemma_ws(f.w, f.ubar, rho0, rho1, de, p, s);
    const LemmaCheckResult b = lemma_ws2(f.w, f.ubar, rho0, rho1, de, p, s);
    const auto [b1, b2] = sampled_b_means(f.w, rho0, rho1, n);
    const double ws = wr + s.p * b1, ws2 = wr + b2;
    CHECK(std::abs(a.lhs - ws) <= 1e-9 * std::abs(ws));
    CHECK(std::abs(b.lhs - ws2) <= 1e-9 * std::abs(ws2));
    CHECK(a.pass);
    CHECK(b.pass);
  }
}

TEST_CASE("radius selection stays inside the window") {
  const ModelParams p = lemma_params();
  const DerivedScales s = validate_and_derive(p);
  const double de = default_lemma_margin(p);
  const RandomWrinkleField f = random_wrinkle_field(5, p, s, 2.0 / 3.0, 0.99, de);
  const auto [r0, r1] = select_radii(f.w, f.ubar, 0.8, 0.1, de, p, s);
  CHECK(r0 >= 0.7);
  CHECK(r0 <= 0.8);
  CHECK(r1 >= 0.8);
  CHECK(r1 <= 0.9);
}

TEST_CASE("sweep modes and preconditions") {
  for (SweepMode m : {SweepMode::construction, SweepMode::relaxed_gap, SweepMode::f0_scaling})
    CHECK(parse_sweep_mode(to_string(m)) == m);
  CHECK_THROWS_AS(parse_sweep_mode("bogus"), RangeError);
  CHECK(theory_slope(SweepMode::f0_scaling, 1.0) == doctest::Approx(0.5));
  CHECK(theory_slope(SweepMode::relaxed_gap, 1.0) == doctest::Approx(2.0));
  CHECK(theory_slope(SweepMode::construction, 2.0) == doctest::Approx(1.0));

  ModelParams p;
  p.beta = 1.0;
  CHECK_THROWS_AS(sweep_excess(p, log_space(1e-6, 1e-2, 5), SweepMode::f0_scaling), RangeError);
  CHECK_THROWS_AS(sweep_excess(p, log_space(1e-4, 1e-3, 8), SweepMode::f0_scaling), RangeError);

  SweepOptions opt;
  opt.jobs = 2;
  const ScalingReport r = sweep_excess(p, log_space(1e-6, 1e-2, 8), SweepMode::f0_scaling, opt);
  REQUIRE(r.points.size() == 8);
  CHECK(r.points.front().first < r.points.back().first);
  CHECK(r.slope == doctest::Approx(0.5).epsilon(0.02));
  CHECK(r.theory == doctest::Approx(0.5));
}
