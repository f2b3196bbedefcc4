#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fvklab/errors.hpp"
#include "fvklab/model.hpp"

using namespace fvklab;

TEST_CASE("derived scales follow the closed forms") {
  ModelParams p;
  p.h = 1e-5;
  p.beta = 0.5;
  p.alpha_s = 3e-4;
  p.r0 = 1.2;
  p.R = 1.7;
  const DerivedScales s = validate_and_derive(p);
  const double pp = std::sqrt(p.alpha_s) * std::pow(p.h, (2.0 - p.beta) / 2.0);
  CHECK(s.p == doctest::Approx(pp).epsilon(1e-14));
  CHECK(s.r_h == doctest::Approx(std::cbrt(16.0 * pp * p.r0 * p.R * p.R)).epsilon(1e-14));
  CHECK(s.factor == doctest::Approx(std::pow(p.h, (2.0 + p.beta) / 4.0)).epsilon(1e-14));
  CHECK(s.k0(0.7) == doctest::Approx(std::pow(p.alpha_s, 0.25) * 0.7 / s.factor).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  ModelParams p;
  SUBCASE("h outside (0,1)") {
    p.h = 1.0;
    CHECK_THROWS_AS(validate_and_derive(p), RangeError);
    p.h = 0.0;
    CHECK_THROWS_AS(validate_and_derive(p), RangeError);
  }
  SUBCASE("beta outside (0,2]") {
    p.beta = 2.5;
    CHECK_THROWS_AS(validate_and_derive(p), RangeError);
    p.beta = 0.0;
    CHECK_THROWS_AS(validate_and_derive(p), RangeError);
  }
  SUBCASE("stiffness bound at beta = 2") {
    p.beta = 2.0;
    p.alpha_s = 1.0;
    CHECK_THROWS_AS(validate_and_derive(p), AssumptionError);
    CHECK(stiffness_bound(p) == doctest::Approx(1.0 / (729.0 * 256.0)));
    p.alpha_s = 1e-6;
    CHECK_NOTHROW(validate_and_derive(p));
  }
  SUBCASE("wrinkling onset too far out") {
    p.h = 0.5;
    p.alpha_s = 0.5;
    CHECK_THROWS_AS(validate_and_derive(p), AssumptionError);
    CHECK_NOTHROW(derive_scales(p));
  }
}

TEST_CASE("exponent table") {
  CHECK(exponents::excess_upper(2.0) == doctest::Approx(1.0));
  CHECK(exponents::excess_upper(1.0) == doctest::Approx(1.25));
  CHECK(exponents::excess_upper(2.0 / 3.0) == doctest::Approx(4.0 / 3.0));
  CHECK(exponents::excess_upper(1.0 / 3.0) == doctest::Approx(7.0 / 6.0));
  CHECK(exponents::relaxed(1.0) == doctest::Approx(0.5));
}

TEST_CASE("gauss-legendre rule integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  for (int d = 0; d <= 15; ++d) {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += w[i] * std::pow(x[i], d);
    const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("radial grids carry the r dr measure") {
  ModelParams p;
  const DerivedScales s = validate_and_derive(p);
  for (GridScheme scheme : {GridScheme::composite_gauss, GridScheme::graded}) {
    const RadialGrid g = build_grid(800, p.r0, scheme, s, 1e-3);
    CHECK(g.breakpoints().front() == 0.0);
    CHECK(g.r0() == doctest::Approx(p.r0));
    for (int d : {0, 1, 3, 6}) {
      const double v = g.integrate_fn([&](double r) { return std::pow(r, d); });
      CHECK(v == doctest::Approx(std::pow(p.r0, d + 2) / (d + 2)).epsilon(1e-13));
    }
    const double plain = g.integrate_plain(std::vector<double>(g.size(), 1.0));
    CHECK(plain == doctest::Approx(p.r0).epsilon(1e-13));
  }
}

TEST_CASE("graded grid refines at the focus") {
  const GradingFocus f{0.3, 1e-4};
  const RadialGrid g = build_grid(1200, 1.0, GridScheme::graded, std::span(&f, 1));
  CHECK(g.finest_element() < 2e-4);
  const std::size_t e = g.locate(0.3);
  CHECK(g.element_width(e) < 5e-4);
}

TEST_CASE("element interpolation and differentiation") {
  const RadialGrid g = build_grid(128, 1.0, GridScheme::composite_gauss);
  const int m = g.points_per_element();
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(3.0 * g.nodes()[i]);
  const double r = 0.4321;
  const std::size_t e = g.locate(r);
  std::vector<double> wv(m), w1(m), w2(m);
  g.basis(e, r, wv, w1, w2);
  double v = 0, d1 = 0, d2 = 0;
  for (int j = 0; j < m; ++j) {
    v += wv[j] * f[e * m + j];
    d1 += w1[j] * f[e * m + j];
    d2 += w2[j] * f[e * m + j];
  }
  CHECK(v == doctest::Approx(std::sin(3 * r)).epsilon(1e-10));
  CHECK(d1 == doctest::Approx(3 * std::cos(3 * r)).epsilon(1e-8));
  CHECK(d2 == doctest::Approx(-9 * std::sin(3 * r)).epsilon(1e-6));
}

TEST_CASE("config parsing") {
  std::istringstream in("# comment\nh = 1e-3\n\nbeta=0.5\nn_radial = 64\nscheme = composite_gauss\n");
  const RunConfig c = parse_config(in);
  CHECK(c.params.h == 1e-3);
  CHECK(c.params.beta == 0.5);
  CHECK(c.n_radial == 64);
  CHECK(c.scheme == GridScheme::composite_gauss);

  std::istringstream round(to_config_text(c));
  const RunConfig c2 = parse_config(round);
  CHECK(c2.params.h == c.params.h);
  CHECK(c2.n_radial == c.n_radial);

  std::istringstream bad("thickness = 1\n");
  CHECK_THROWS_AS(parse_config(bad), RangeError);
  std::istringstream bad_num("h = abc\n");
  CHECK_THROWS_AS(parse_config(bad_num), RangeError);
}
