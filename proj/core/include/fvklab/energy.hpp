#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fvklab/angular_field.hpp"
#include "fvklab/model.hpp"
#include "fvklab/trig_series.hpp"

namespace fvklab {

/// Integrands of the energy at a single radius (before the r dr weight).
struct EnergyDensity {
  double membrane = 0.0;
  double bending = 0.0;
  double substrate = 0.0;
  double mean_part = 0.0;
  double wr = 0.0;
  std::array<double, 5> remainder{};
  double b = 0.0;

  double total() const { return membrane + bending + substrate; }
};

/// E_h in direct form and in the mean / W_r / remainder decomposition,
/// using the angular-average convention. b_profile holds B at the grid nodes.
struct EnergyBreakdown {
  double total = 0.0;
  double membrane = 0.0;
  double bending = 0.0;
  double substrate = 0.0;
  double mean_part = 0.0;
  double wr_integral = 0.0;
  std::array<double, 5> remainder{};
  std::vector<double> b_profile;

  double remainder_sum() const;
  double decomposed_total() const { return mean_part + wr_integral + remainder_sum(); }
  /// |total - decomposed| / max(1, |total|).
  double identity_defect() const;
};

/// Relaxed cost of absorbing strain eta by wrinkling.
double w_rel(double eta, const DerivedScales& scales);
double w_rel_prime(double eta, const DerivedScales& scales);

/// Cost W_r(eta, w) of a slice w(r, .) from its definition (Plancherel sums).
double w_r(double eta, const TrigSeries& w, double r, const ModelParams& params);
/// Same quantity via the completed-square wavenumber form.
double w_r_spectral(double eta, const TrigSeries& w, double r, const ModelParams& params,
                    const DerivedScales& scales);

/// Pointwise energy integrands from the radial jets of (u_r, u_theta, w).
EnergyDensity energy_density(const SheetJet& jet, double r, const ModelParams& params);

/// Integrates energy_density over a grid. `jet_at_node` supplies the jets, so
/// states that are never stored (the explicit construction) can stream.
EnergyBreakdown integrate_energy(const RadialGrid& grid,
                                 const std::function<SheetJet(std::size_t)>& jet_at_node,
                                 const ModelParams& params);

EnergyBreakdown full_energy(const SheetState& state, const ModelParams& params,
                            const DerivedScales& scales);

std::array<double, 5> remainder(const SheetState& state, const ModelParams& params,
                                const DerivedScales& scales);

/// B(r) = average of |d_r (w - mean w)|^2 at the grid nodes.
std::vector<double> b_profile(const AngularField& w);

}  // namespace fvklab
