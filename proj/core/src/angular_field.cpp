#include "fvklab/angular_field.hpp"

#include <algorithm>
#include <cmath>

#include "fvklab/errors.hpp"

namespace fvklab {

AngularField::AngularField(std::shared_ptr<const RadialGrid> grid, std::int64_t kmax,
                           std::int64_t stride)
    : grid_(std::move(grid)), kmax_(kmax), stride_(stride) {
  if (!grid_) throw GridError("AngularField: null grid");
  if (kmax < 0) throw RangeError("AngularField: kmax must be nonnegative");
  if (stride < 1) throw RangeError("AngularField: stride must be positive");
  const std::size_t n = grid_->size();
  mean_.assign(n, 0.0);
  cos_.assign(n * static_cast<std::size_t>(kmax), 0.0);
  sin_.assign(n * static_cast<std::size_t>(kmax), 0.0);
}

std::vector<double> AngularField::profile(int kind, std::int64_t k) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i)
    out[i] = kind == 0 ? mean_[i] : (kind == 1 ? cos_[index(i, k)] : sin_[index(i, k)]);
  return out;
}

TrigSeries AngularField::slice(std::size_t node) const {
  auto b = cos_.begin() + static_cast<std::ptrdiff_t>(node * static_cast<std::size_t>(kmax_));
  auto s = sin_.begin() + static_cast<std::ptrdiff_t>(node * static_cast<std::size_t>(kmax_));
  return TrigSeries::dense(mean_[node], std::vector<double>(b, b + kmax_),
                           std::vector<double>(s, s + kmax_), stride_);
}

RadialJet AngularField::combine(std::size_t e, std::span<const double> wv,
                                std::span<const double> w1, std::span<const double> w2) const {
  const int m = grid_->points_per_element();
  const std::size_t base = e * static_cast<std::size_t>(m);
  const std::size_t K = static_cast<std::size_t>(kmax_);
  auto build = [&](std::span<const double> w) {
    double mean = 0.0;
    std::vector<double> c(K, 0.0), s(K, 0.0);
    for (int j = 0; j < m; ++j) {
      const double wj = w[static_cast<std::size_t>(j)];
      if (wj == 0.0) continue;
      const std::size_t node = base + static_cast<std::size_t>(j);
      mean += wj * mean_[node];
      const double* pc = cos_.data() + node * K;
      const double* ps = sin_.data() + node * K;
      for (std::size_t k = 0; k < K; ++k) {
        c[k] += wj * pc[k];
        s[k] += wj * ps[k];
      }
    }
    return TrigSeries::dense(mean, std::move(c), std::move(s), stride_);
  };
  return RadialJet{build(wv), build(w1), build(w2)};
}

RadialJet AngularField::jet(std::size_t node) const {
  const int m = grid_->points_per_element();
  const std::size_t e = grid_->element_of(node);
  const int li = static_cast<int>(node - e * static_cast<std::size_t>(m));
  std::vector<double> wv(m, 0.0), w1(m), w2(m);
  wv[static_cast<std::size_t>(li)] = 1.0;
  for (int j = 0; j < m; ++j) {
    w1[static_cast<std::size_t>(j)] = grid_->diff(e, li, j);
    w2[static_cast<std::size_t>(j)] = grid_->diff2(e, li, j);
  }
  return combine(e, wv, w1, w2);
}

RadialJet AngularField::jet_at(double r) const {
  if (!(r > 0.0) || r > grid_->r0()) throw RangeError("jet_at: radius outside (0, r0]");
  const int m = grid_->points_per_element();
  const std::size_t e = grid_->locate(r);
  std::vector<double> wv(m), w1(m), w2(m);
  grid_->basis(e, r, wv, w1, w2);
  return combine(e, wv, w1, w2);
}

double AngularField::resolution_indicator() const {
  const RadialGrid& g = *grid_;
  const int m = g.points_per_element();
  std::vector<double> x, w;
  gauss_legendre(m, x, w);
  // Legendre values P_n(x_j) for the modal transform.
  std::vector<double> P(static_cast<std::size_t>(m * m));
  for (int j = 0; j < m; ++j) {
    double p0 = 1.0, p1 = x[j];
    P[static_cast<std::size_t>(j)] = 1.0;
    if (m > 1) P[static_cast<std::size_t>(m + j)] = p1;
    for (int n = 2; n < m; ++n) {
      double p2 = ((2.0 * n - 1.0) * x[j] * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
      P[static_cast<std::size_t>(n * m + j)] = p2;
    }
  }
  double worst = 0.0;
  auto check = [&](const std::vector<double>& f) {
    double scale = 0.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return;
    for (std::size_t e = 0; e < g.element_count(); ++e) {
      const std::size_t base = e * static_cast<std::size_t>(m);
      double tail = 0.0;
      for (int n = m - 2; n < m; ++n) {
        double a = 0.0;
        for (int j = 0; j < m; ++j) a += w[j] * P[static_cast<std::size_t>(n * m + j)] * f[base + j];
        tail = std::max(tail, std::abs(a * (2.0 * n + 1.0) / 2.0));
      }
      worst = std::max(worst, tail / scale);
    }
  };
  check(profile(0, 0));
  for (std::int64_t k = 1; k <= kmax_; ++k) {
    check(profile(1, k));
    check(profile(2, k));
  }
  return worst;
}

void AngularField::require_resolved(double tol) const {
  double ind = resolution_indicator();
  if (ind > tol)
    throw GridError("radial resolution insufficient (Legendre tail " + std::to_string(ind) + ")");
}

SheetState SheetState::zeros(std::shared_ptr<const RadialGrid> grid, std::int64_t kmax,
                             std::int64_t stride) {
  return SheetState{AngularField(grid, kmax, stride), AngularField(grid, kmax, stride),
                    AngularField(grid, kmax, stride)};
}

void SheetState::validate() const {
  if (!u_r.grid() || !u_theta.grid() || !w.grid()) throw GridError("SheetState: missing grid");
  const RadialGrid& g = *w.grid();
  if (!(u_r.grid() == w.grid() || u_r.grid()->same_as(g)) ||
      !(u_theta.grid() == w.grid() || u_theta.grid()->same_as(g)))
    throw GridError("SheetState: fields live on different grids");
  if (u_r.kmax() != w.kmax() || u_theta.kmax() != w.kmax())
    throw GridError("SheetState: fields have different angular cutoffs");
  if (u_r.stride() != w.stride() || u_theta.stride() != w.stride())
    throw GridError("SheetState: fields have different mode strides");
}

double SheetState::xi(std::size_t node, double theta, double R) const {
  double r = grid().nodes()[node];
  return w.eval(node, theta) - r * r / (2.0 * R);
}

}  // namespace fvklab
