#include <cmath>

#include "doctest.h"
#include "fvklab/angular_field.hpp"
#include "fvklab/errors.hpp"
#include "support.hpp"

using namespace fvklab;
using fvklab::test::Rng;

TEST_CASE("trig series evaluation matches the orthonormal basis") {
  TrigSeries f(0.5);
  f.add_mode(3, 0.2, -0.1);
  const double th = 0.7;
  const double expect = 0.5 + std::sqrt(2.0) * (0.2 * std::cos(3 * th) - 0.1 * std::sin(3 * th));
  CHECK(f.eval(th) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(f.mean_square() ==
        doctest::Approx(test::theta_mean([&](double t) { return f.eval(t) * f.eval(t); }, 64)));
}

TEST_CASE("products agree with pointwise multiplication") {
  Rng rng(7);
  for (std::int64_t stride : {1, 3}) {
    const TrigSeries f = test::random_series(rng, 9, 1.0, stride);
    const TrigSeries g = test::random_series(rng, 6, 1.0, stride);
    const TrigSeries fg = product(f, g);
    for (double th : {0.0, 0.3, 1.9, 4.4})
      CHECK(fg.eval(th) == doctest::Approx(f.eval(th) * g.eval(th)).epsilon(1e-12));
    CHECK(mean_product(f, g) ==
          doctest::Approx(test::theta_mean([&](double t) { return f.eval(t) * g.eval(t); }, 128))
              .epsilon(1e-12));
  }
}

TEST_CASE("angular derivatives") {
  Rng rng(3);
  const TrigSeries f = test::random_series(rng, 7, 1.0, 2);
  const TrigSeries d = f.d_theta();
  CHECK(d.mean() == 0.0);
  for (double th : {0.1, 2.2})
    CHECK(d.eval(th) == doctest::Approx(test::eval_dtheta(f, th, 1)).epsilon(1e-12));
  const double ws2 = test::theta_mean(
      [&](double t) { return std::pow(test::eval_dtheta(f, t, 1), 2); }, 64);
  CHECK(f.weighted_square(2) == doctest::Approx(ws2).epsilon(1e-12));
}

TEST_CASE("sparse bands") {
  TrigSeries f(0.0, 5);
  const double c[3] = {1, 2, 3}, s[3] = {0, 1, 0};
  f.add_band(100, c, s, 3);
  f.add_band(101, c, s, 1, 2.0);
  CHECK(f.max_index() == 102);
  CHECK(f.max_wavenumber() == 510);
  CHECK(f.cos_at(101) == doctest::Approx(4.0));
  CHECK(f.cos_at(7) == 0.0);
  TrigSeries g(0.0, 4);
  CHECK_NOTHROW(f += g);
  g.add_mode(1, 1.0, 0.0);
  CHECK_THROWS_AS(f += g, RangeError);
}

TEST_CASE("fields share grid, cutoff and stride") {
  auto grid = std::make_shared<const RadialGrid>(build_grid(64, 1.0, GridScheme::composite_gauss));
  SheetState s = SheetState::zeros(grid, 4, 2);
  CHECK_NOTHROW(s.validate());
  s.u_r = AngularField(grid, 5, 2);
  CHECK_THROWS_AS(s.validate(), GridError);
  s.u_r = AngularField(grid, 4, 3);
  CHECK_THROWS_AS(s.validate(), GridError);
}

TEST_CASE("field jets interpolate smooth profiles") {
  auto grid = std::make_shared<const RadialGrid>(build_grid(256, 1.0, GridScheme::composite_gauss));
  AngularField f(grid, 3);
  const auto nodes = grid->nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) f.cos(i, 2) = std::exp(nodes[i]);
  const RadialJet j = f.jet_at(0.55);
  CHECK(j.v.cos_at(2) == doctest::Approx(std::exp(0.55)).epsilon(1e-12));
  CHECK(j.d1.cos_at(2) == doctest::Approx(std::exp(0.55)).epsilon(1e-9));
  CHECK(j.d2.cos_at(2) == doctest::Approx(std::exp(0.55)).epsilon(1e-6));
  CHECK(f.resolution_indicator() < 1e-8);
  CHECK_THROWS_AS(f.jet_at(1.5), RangeError);
}

TEST_CASE("unresolved data is flagged") {
  auto grid = std::make_shared<const RadialGrid>(build_grid(32, 1.0, GridScheme::composite_gauss));
  AngularField f(grid, 1);
  const auto nodes = grid->nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) f.cos(i, 1) = std::sin(400.0 * nodes[i]);
  CHECK_THROWS_AS(f.require_resolved(), GridError);
}
