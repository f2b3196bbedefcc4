#pragma once

#include <cstdint>
#include <vector>

namespace fvklab {

/// Contiguous run of Fourier modes first, first+1, ... (in units of the
/// series stride).
struct ModeBlock {
  std::int64_t first = 1;
  std::vector<double> cos;
  std::vector<double> sin;

  std::int64_t last() const { return first + static_cast<std::int64_t>(cos.size()) - 1; }
  std::size_t size() const { return cos.size(); }
};

/// Real trigonometric series in the basis {1, sqrt2 cos(k theta), sqrt2 sin(k theta)},
/// orthonormal for the angular average. Only wavenumbers stride * j, j >= 1,
/// are representable; nonzero coefficients live in sorted disjoint blocks so
/// that narrow wavepackets at large wavenumber stay cheap.
class TrigSeries {
 public:
  TrigSeries() = default;
  explicit TrigSeries(double mean, std::int64_t stride = 1) : mean_(mean), stride_(stride) {}

  /// Modes 1..K from dense coefficient arrays.
  static TrigSeries dense(double mean, std::vector<double> cos, std::vector<double> sin,
                          std::int64_t stride = 1);

  double mean() const { return mean_; }
  void set_mean(double m) { mean_ = m; }
  std::int64_t stride() const { return stride_; }
  const std::vector<ModeBlock>& blocks() const { return blocks_; }
  bool empty_fluctuation() const { return blocks_.empty(); }
  /// Largest index j with a stored coefficient (0 if none).
  std::int64_t max_index() const { return blocks_.empty() ? 0 : blocks_.back().last(); }
  std::int64_t max_wavenumber() const { return max_index() * stride_; }

  /// Adds coefficients for indices first, first+1, ... scaled by a.
  void add_band(std::int64_t first, const double* cos, const double* sin, std::size_t n,
                double a = 1.0);
  /// Sets or adds a single mode.
  void add_mode(std::int64_t index, double c, double s);

  double cos_at(std::int64_t index) const;
  double sin_at(std::int64_t index) const;

  /// Angular average of f^2.
  double mean_square() const { return mean_ * mean_ + fluct_square(); }
  /// Angular average of (f - mean)^2.
  double fluct_square() const;
  /// Sum over modes of K^power (c^2 + s^2), K the actual wavenumber.
  double weighted_square(int power) const;

  double eval(double theta) const;
  TrigSeries d_theta() const;

  TrigSeries& operator*=(double a);
  TrigSeries& operator+=(const TrigSeries& o);
  TrigSeries& operator-=(const TrigSeries& o);
  friend TrigSeries operator+(TrigSeries a, const TrigSeries& b) { return a += b; }
  friend TrigSeries operator-(TrigSeries a, const TrigSeries& b) { return a -= b; }
  friend TrigSeries operator*(TrigSeries a, double s) { return a *= s; }
  friend TrigSeries operator*(double s, TrigSeries a) { return a *= s; }

 private:
  void check_stride(const TrigSeries& o) const;

  double mean_ = 0.0;
  std::int64_t stride_ = 1;
  std::vector<ModeBlock> blocks_;
};

/// Pointwise product in theta, exact in the coefficient space.
TrigSeries product(const TrigSeries& f, const TrigSeries& g);

/// Angular average of f * g.
double mean_product(const TrigSeries& f, const TrigSeries& g);

}  // namespace fvklab
