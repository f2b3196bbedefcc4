#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fvklab {

/// Physical inputs. Everything is nondimensional.
struct ModelParams {
  double h = 1e-4;        ///< thickness, in (0, 1)
  double beta = 1.0;      ///< substrate exponent, in (0, 2]
  double alpha_s = 1e-4;  ///< substrate stiffness
  double r0 = 1.0;        ///< sheet radius
  double R = 1.0;         ///< substrate ball radius
};

/// Scales derived from ModelParams.
///
/// p is the cost per unit of arclength wasted by wrinkling (the kink of the
/// relaxed cost sits at -2p), r_h the radius where the relaxed minimizer
/// starts to wrinkle, `factor` the wavelength scale and k0_coeff the slope
/// of the optimal angular wavenumber k0(r) = k0_coeff * r.
struct DerivedScales {
  double p = 0.0;
  double r_h = 0.0;
  double factor = 0.0;
  double k0_coeff = 0.0;

  double k0(double r) const { return k0_coeff * r; }
};

/// Powers of h that appear throughout. They are kept together because the
/// source formulas only fix them implicitly; each is forced by one of the
/// closed forms (sharp Cauchy-Schwarz bound, optimal wavenumber, ...).
namespace exponents {
/// p = alpha_s^{1/2} h^{(2-beta)/2}; also the F0(u0) scaling.
constexpr double relaxed(double beta) { return (2.0 - beta) / 2.0; }
/// Wrinkle wavelength h^{(2+beta)/4}.
constexpr double wavelength(double beta) { return (2.0 + beta) / 4.0; }
/// Excess energy in the stiff regime, h^{(6-beta)/4}.
constexpr double excess_stiff(double beta) { return (6.0 - beta) / 4.0; }
/// Excess upper bound in the soft regime, h^{(2+beta)/2}.
constexpr double excess_soft(double beta) { return (2.0 + beta) / 2.0; }
/// Constrained lower bound in the soft regime.
constexpr double excess_soft_lower = 4.0 / 3.0;
/// Exponent of the upper-bound construction for a given beta.
constexpr double excess_upper(double beta) {
  return beta >= 2.0 / 3.0 ? excess_stiff(beta) : excess_soft(beta);
}
/// Interval length matching the two h-dependent terms of the first
/// wavenumber-change inequality.
constexpr double lemma_ws_length(double beta) { return (2.0 + beta) / 8.0; }
/// Same for the B^2 variant.
constexpr double lemma_ws2_length(double beta) { return (2.0 + 3.0 * beta) / 12.0; }
/// Relaxed-functional gap F_h(u0,0) - min F_h.
constexpr double relaxed_gap = 2.0;
}  // namespace exponents

/// Upper bound on alpha_s at beta = 2: 3^-6 2^-8 r0^4 R^-4.
double stiffness_bound(const ModelParams& params);

bool in_domain(const ModelParams& params);
bool satisfies_standing_assumptions(const ModelParams& params);

/// Validates parameters and computes the derived scales.
/// Throws RangeError when a field is out of its domain and AssumptionError
/// when r_h > r0/3 or the beta = 2 stiffness bound fails.
DerivedScales validate_and_derive(const ModelParams& params);

/// Scales without the standing-assumption checks (domain checks remain).
DerivedScales derive_scales(const ModelParams& params);

// ---------------------------------------------------------------------------
// Radial quadrature

enum class GridScheme { composite_gauss, graded };

GridScheme parse_scheme(const std::string& name);
std::string to_string(GridScheme scheme);

/// A point where the graded scheme refines, with the element width wanted
/// there. Widths grow geometrically away from the center.
struct GradingFocus {
  double center = 0.0;
  double finest = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Composite Gauss-Legendre quadrature for integrals of f(r) r dr on (0, r0).
///
/// Nodes are interior Gauss points of contiguous elements, so every node
/// belongs to exactly one element and the element-local Lagrange basis gives
/// interpolation and differentiation of sampled data.
class RadialGrid {
 public:
  static constexpr int kDefaultPointsPerElement = 8;

  RadialGrid() = default;

  /// Builds a grid from element breakpoints b_0 = 0 < b_1 < ... < b_E.
  static RadialGrid from_breakpoints(std::vector<double> breakpoints,
                                     int points_per_element = kDefaultPointsPerElement);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  /// Weights for the measure r dr.
  std::span<const double> weights() const { return weights_; }
  /// Weights for the measure dr.
  std::span<const double> plain_weights() const { return plain_weights_; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  double r0() const { return breakpoints_.back(); }
  int points_per_element() const { return ppe_; }
  std::size_t element_count() const { return breakpoints_.size() - 1; }
  std::size_t element_of(std::size_t node) const { return node / ppe_; }
  double element_width(std::size_t e) const { return breakpoints_[e + 1] - breakpoints_[e]; }
  double finest_element() const;
  double coarsest_element() const;

  /// Element containing r (clamped to the grid).
  std::size_t locate(double r) const;

  /// Lagrange basis of element e evaluated at r: weights for the value, the
  /// first and the second derivative of the interpolant.
  void basis(std::size_t e, double r, std::span<double> value, std::span<double> d1,
             std::span<double> d2) const;

  /// Differentiation matrix on the reference element (row-major, ppe x ppe)
  /// with respect to the physical coordinate of element e.
  double diff(std::size_t e, int i, int j) const {
    return ref_diff_[static_cast<std::size_t>(i * ppe_ + j)] * 2.0 / element_width(e);
  }
  /// Second-derivative matrix, same layout.
  double diff2(std::size_t e, int i, int j) const {
    double s = 2.0 / element_width(e);
    return ref_diff2_[static_cast<std::size_t>(i * ppe_ + j)] * s * s;
  }

  /// Sum of f_i * weight_i with compensated summation.
  double integrate(std::span<const double> samples) const;
  double integrate_plain(std::span<const double> samples) const;

  template <class F>
  double integrate_fn(F&& f) const {
    std::vector<double> s(size());
    for (std::size_t i = 0; i < size(); ++i) s[i] = f(nodes_[i]);
    return integrate(s);
  }

  bool same_as(const RadialGrid& other) const;

 private:
  int ppe_ = kDefaultPointsPerElement;
  std::vector<double> breakpoints_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> plain_weights_;
  std::vector<double> ref_nodes_;
  std::vector<double> ref_bary_;
  std::vector<double> ref_diff_;
  std::vector<double> ref_diff2_;
};

/// Builds a grid of about n nodes on (0, r0]. The graded scheme refines
/// geometrically around each focus; without foci it equals composite_gauss.
RadialGrid build_grid(int n, double r0, GridScheme scheme,
                      std::span<const GradingFocus> foci = {}, double growth = 1.15);

/// Graded grid refined at r_h with finest element `finest`.
RadialGrid build_grid(int n, double r0, GridScheme scheme, const DerivedScales& scales,
                      double finest);

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// key=value configuration

struct RunConfig {
  ModelParams params;
  int n_radial = 512;
  std::int64_t kmax = 0;  ///< 0 = no explicit angular cutoff
  GridScheme scheme = GridScheme::graded;
};

/// Parses `key = value` lines (keys: h, beta, alpha_s, r0, R, n_radial,
/// kmax, scheme). Blank lines and `#` comments are ignored; unknown keys and
/// malformed numbers raise RangeError.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);
std::string to_config_text(const RunConfig& config);

}  // namespace fvklab
