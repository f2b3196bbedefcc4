#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fvklab/model.hpp"
#include "fvklab/trig_series.hpp"

namespace fvklab {

/// Value, first and second radial derivative of an angular series at one radius.
struct RadialJet {
  TrigSeries v, d1, d2;
};

/// Jets of (u_r, u_theta, w) at one radius.
struct SheetJet {
  RadialJet u_r, u_theta, w;
};

/// Fourier coefficients of f(r, theta) sampled on the nodes of a RadialGrid:
/// mean a0(r) and a_k(r), b_k(r) for k = 1..kmax in the orthonormal basis.
/// Index k stands for wavenumber k * stride.
class AngularField {
 public:
  AngularField() = default;
  AngularField(std::shared_ptr<const RadialGrid> grid, std::int64_t kmax, std::int64_t stride = 1);

  const std::shared_ptr<const RadialGrid>& grid() const { return grid_; }
  std::int64_t kmax() const { return kmax_; }
  std::int64_t stride() const { return stride_; }
  std::size_t size() const { return mean_.size(); }

  double& mean(std::size_t node) { return mean_[node]; }
  double mean(std::size_t node) const { return mean_[node]; }
  double& cos(std::size_t node, std::int64_t k) { return cos_[index(node, k)]; }
  double cos(std::size_t node, std::int64_t k) const { return cos_[index(node, k)]; }
  double& sin(std::size_t node, std::int64_t k) { return sin_[index(node, k)]; }
  double sin(std::size_t node, std::int64_t k) const { return sin_[index(node, k)]; }
  std::span<const double> mean_profile() const { return mean_; }

  /// Coefficient profile over all nodes; kind 0 = mean, 1 = cos, 2 = sin.
  std::vector<double> profile(int kind, std::int64_t k) const;

  TrigSeries slice(std::size_t node) const;
  double eval(std::size_t node, double theta) const { return slice(node).eval(theta); }

  /// Jet at a grid node from element-local Lagrange differentiation.
  RadialJet jet(std::size_t node) const;
  /// Jet at an arbitrary radius by element-local interpolation.
  RadialJet jet_at(double r) const;

  /// Largest relative Legendre tail of any coefficient profile over any
  /// element. Near machine precision for smooth, resolved data.
  double resolution_indicator() const;
  /// Throws GridError when resolution_indicator() exceeds tol.
  void require_resolved(double tol = 1e-6) const;

 private:
  std::size_t index(std::size_t node, std::int64_t k) const {
    return node * static_cast<std::size_t>(kmax_) + static_cast<std::size_t>(k - 1);
  }
  RadialJet combine(std::size_t e, std::span<const double> wv, std::span<const double> w1,
                    std::span<const double> w2) const;

  std::shared_ptr<const RadialGrid> grid_;
  std::int64_t kmax_ = 0;
  std::int64_t stride_ = 1;
  std::vector<double> mean_, cos_, sin_;
};

/// Displacements (u_r, u_theta) and relative out-of-plane displacement
/// w = xi + r^2/(2R), all on one grid with one angular cutoff.
struct SheetState {
  AngularField u_r, u_theta, w;

  static SheetState zeros(std::shared_ptr<const RadialGrid> grid, std::int64_t kmax,
                          std::int64_t stride = 1);
  /// Throws GridError unless the three fields share grid, kmax and stride.
  void validate() const;
  const RadialGrid& grid() const { return *w.grid(); }
  SheetJet jet(std::size_t node) const { return {u_r.jet(node), u_theta.jet(node), w.jet(node)}; }
  /// xi(r, theta) = w - r^2/(2R) at a node.
  double xi(std::size_t node, double theta, double R) const;
};

}  // namespace fvklab
