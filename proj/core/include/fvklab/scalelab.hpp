#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fvklab/angular_field.hpp"
#include "fvklab/model.hpp"
#include "fvklab/relaxed.hpp"

namespace fvklab {

// ---------------------------------------------------------------------------
// Wavenumber-change inequalities

struct LemmaCheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< lhs - rhs
  bool pass = false;    ///< margin >= -1e-12 (1 + |rhs|)
  std::string inputs_digest;
};

/// Right-hand side of the B-weighted inequality.
double lemma_ws_rhs(double rho0, double rho1, double de, const ModelParams& params,
                    const DerivedScales& scales);
/// Right-hand side of the B^2 variant (four-way minimum).
double lemma_ws2_rhs(double rho0, double rho1, double de, const ModelParams& params,
                     const DerivedScales& scales);

/// Sum over i of W_rho_i(eta_i, w) - W_rel(eta_i) with eta_i = ubar(rho_i)/rho_i.
double lemma_wr_excess(const AngularField& w, const RadialProfile& ubar, double rho0, double rho1,
                       const ModelParams& params, const DerivedScales& scales);
/// Average over [rho0, rho1] of B^power, exact for the element-local interpolant.
double mean_b_power(const AngularField& w, double rho0, double rho1, int power);

/// Throws HypothesisError unless 0 < rho0 < rho1 < r0, de >= 0 and
/// ubar(rho_i)/rho_i <= -2p - de.
void check_lemma_hypotheses(const RadialProfile& ubar, double rho0, double rho1, double de,
                            const ModelParams& params, const DerivedScales& scales);

LemmaCheckResult lemma_ws(const AngularField& w, const RadialProfile& ubar, double rho0,
                          double rho1, double de, const ModelParams& params,
                          const DerivedScales& scales);
LemmaCheckResult lemma_ws2(const AngularField& w, const RadialProfile& ubar, double rho0,
                           double rho1, double de, const ModelParams& params,
                           const DerivedScales& scales);

/// Default hypothesis margin: r0^2 / (72 R^2) / 96.
double default_lemma_margin(const ModelParams& params);

/// Interval length that balances the two h-dependent terms of each rhs.
double lemma_ws_matched_length(double rho0, const ModelParams& params,
                               const DerivedScales& scales);
double lemma_ws2_matched_length(double rho0, const ModelParams& params,
                                const DerivedScales& scales);

/// Picks rho0 in [center - half, center] and rho1 in [center, center + half]
/// at the grid nodes where W_r - W_rel is smallest among those satisfying the
/// hypothesis. Throws HypothesisError if a half has no admissible node.
std::pair<double, double> select_radii(const AngularField& w, const RadialProfile& ubar,
                                       double center, double half, double de,
                                       const ModelParams& params, const DerivedScales& scales);

// ---------------------------------------------------------------------------
// Random hypothesis-satisfying inputs

struct RandomFieldOptions {
  int elements = 48;  ///< elements on [r0/2, r0]
};

struct RandomWrinkleField {
  AngularField w;
  RadialProfile ubar;
  std::uint64_t seed = 0;
  double band_center_offset = 0.0;  ///< packet center minus k0(r)
  double band_half_width = 0.0;     ///< allowed |offset|
  std::string digest;               ///< hash of seed, params and every coefficient
};

/// Wavepackets around k0(r) with random phases and smooth random amplitudes,
/// plus ubar with ubar/r <= -2p - de on [lo, hi]. Deterministic per seed.
RandomWrinkleField random_wrinkle_field(std::uint64_t seed, const ModelParams& params,
                                        const DerivedScales& scales, double lo, double hi,
                                        double de, RandomFieldOptions options = {});

// ---------------------------------------------------------------------------
// Power-law fits and sweeps

enum class FitModel { power, power_log };
std::string to_string(FitModel model);

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double log_coeff = 0.0;  ///< coefficient of log|log h| (power_log only)
  double residual = 0.0;   ///< max |fit / value - 1|
  double slope_ci = 0.0;   ///< 95% half-width of the slope
};

/// Least squares of log y against slope log h + intercept (+ c log|log h|).
/// Throws FitError on nonpositive values or too few points.
PowerFit fit_powerlaw(const std::vector<std::pair<double, double>>& points,
                      FitModel model = FitModel::power);

enum class SweepMode { construction, relaxed_gap, f0_scaling };
SweepMode parse_sweep_mode(const std::string& name);
std::string to_string(SweepMode mode);

struct SweepOptions {
  int jobs = 1;
  double q = 2.0;     ///< construction window exponent knob
  int n_radial = 0;   ///< 0 = mode default
  /// Largest accepted residual of the pure power fit.
  double max_residual = 0.2;
};

struct ScalingReport {
  SweepMode mode = SweepMode::construction;
  ModelParams params;  ///< template; h varies across points
  std::vector<std::pair<double, double>> points;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  double slope_ci = 0.0;
  FitModel model = FitModel::power;
  PowerFit log_fit;     ///< power_log fit of the same points
  double theory = 0.0;  ///< expected exponent
};

/// Expected exponent of a sweep quantity.
double theory_slope(SweepMode mode, double beta);

/// Evaluates one sweep point.
double sweep_value(SweepMode mode, const ModelParams& params, const SweepOptions& options);

/// Evaluates the quantity for each h concurrently and fits. Points are
/// ordered by h. Requires >= 6 values spanning >= 2 decades; throws FitError
/// when the pure power residual exceeds options.max_residual.
ScalingReport sweep_excess(const ModelParams& params, std::vector<double> h_list, SweepMode mode,
                           const SweepOptions& options = {});

/// Log-spaced values lo..hi inclusive.
std::vector<double> log_space(double lo, double hi, int count);

}  // namespace fvklab
