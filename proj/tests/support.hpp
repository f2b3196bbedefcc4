#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>

#include "fvklab/angular_field.hpp"
#include "fvklab/model.hpp"
#include "fvklab/trig_series.hpp"

namespace fvklab::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double a = 0.0, double b = 1.0) {
    return a + (b - a) * static_cast<double>(g_() >> 11) * 0x1.0p-53;
  }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 g_;
};

/// Dense random series with modes 1..K.
inline TrigSeries random_series(Rng& rng, std::int64_t K, double scale, std::int64_t stride = 1) {
  std::vector<double> c(static_cast<std::size_t>(K)), s(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double decay = scale / (1.0 + static_cast<double>(k));
    c[k] = rng.uniform(-1, 1) * decay;
    s[k] = rng.uniform(-1, 1) * decay;
  }
  return TrigSeries::dense(rng.uniform(-scale, scale), std::move(c), std::move(s), stride);
}

/// Fills a field with random low-degree polynomial coefficient profiles.
inline void fill_random(AngularField& f, Rng& rng, double scale) {
  const auto nodes = f.grid()->nodes();
  auto poly = [&](double a0, double a1, double a2, double a3, double r) {
    return a0 + r * (a1 + r * (a2 + r * a3));
  };
  for (int kind = 0; kind < 3; ++kind) {
    const std::int64_t kmax = kind == 0 ? 1 : f.kmax();
    for (std::int64_t k = 1; k <= kmax; ++k) {
      const double d = scale / (1.0 + static_cast<double>(k));
      const double a0 = rng.uniform(-d, d), a1 = rng.uniform(-d, d), a2 = rng.uniform(-d, d),
                   a3 = rng.uniform(-d, d);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double v = poly(a0, a1, a2, a3, nodes[i]);
        if (kind == 0)
          f.mean(i) = v;
        else if (kind == 1)
          f.cos(i, k) = v;
        else
          f.sin(i, k) = v;
      }
    }
  }
}

inline SheetState random_state(std::uint64_t seed, std::shared_ptr<const RadialGrid> grid,
                               std::int64_t kmax, std::int64_t stride = 1) {
  Rng rng(seed);
  SheetState s = SheetState::zeros(grid, kmax, stride);
  fill_random(s.u_r, rng, 1e-2);
  fill_random(s.u_theta, rng, 1e-2);
  fill_random(s.w, rng, 5e-2);
  return s;
}

/// Angular average of f over n equispaced samples.
template <class F>
double theta_mean(F&& f, int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += f(2.0 * M_PI * j / n);
  return s / n;
}

/// Derivative in theta by direct summation of the series, independent of d_theta().
inline double eval_dtheta(const TrigSeries& f, double th, int order) {
  double v = 0.0;
  const double s2 = std::sqrt(2.0);
  for (const auto& b : f.blocks())
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double k = static_cast<double>((b.first + static_cast<std::int64_t>(i)) * f.stride());
      const double c = std::cos(k * th), s = std::sin(k * th);
      if (order == 1)
        v += s2 * k * (-b.cos[i] * s + b.sin[i] * c);
      else
        v += s2 * k * k * (-b.cos[i] * c - b.sin[i] * s);
    }
  return v;
}

}  // namespace fvklab::test
