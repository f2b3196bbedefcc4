#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "fvklab/angular_field.hpp"
#include "fvklab/energy.hpp"
#include "fvklab/model.hpp"

namespace fvklab {

/// Bump m(t) = exp(-1 / (1 - 4 t^2)) on |t| < 1/2, zero elsewhere.
double bump(double t);
double bump_d1(double t);
double bump_d2(double t);
/// Integral of m^2 over the real line.
double bump_square_integral();

/// Smooth monotone cutoff: 0 for t <= 1, 1 for t >= 2.
double cutoff(double t);
double cutoff_d1(double t);
double cutoff_d2(double t);

/// |t * sum_k f(t k + zeta) - integral|, the sum running over all integers k
/// with t k + zeta inside [support_lo, support_hi].
double sum_vs_integral(const std::function<double(double)>& f, double support_lo,
                       double support_hi, double integral, double t, double zeta);
/// The same for f = m^2.
double sum_vs_integral_bump_square(double t, double zeta);

struct ConstructionConfig {
  double q = 2.0;        ///< h^{-delta} = (log 1/h)^q
  double delta = 0.0;    ///< frequency-window exponent
  double ell = 0.0;      ///< wavelength parameter
  double alpha = 0.0;    ///< cutoff-width exponent: A switches on over [r_h + h^a, r_h + 2h^a]
  std::int64_t N = 1;    ///< mode stride, round(h^delta / ell)
  std::int64_t kmax = 0; ///< largest window index k (wavenumber k N)
};

/// Parameter choices for the given beta range (see exponents in model.hpp).
ConstructionConfig default_config(const ModelParams& params, const DerivedScales& scales,
                                  double q = 2.0);

/// Radial profiles of the wrinkle amplitude at the grid nodes.
struct AmplitudeProfile {
  std::vector<double> A, gamma0, gamma_tilde, gamma;
};

AmplitudeProfile amplitude_profile(const ModelParams& params, const DerivedScales& scales,
                                   const ConstructionConfig& config, const RadialGrid& grid);

/// The explicit wrinkled test state. Radial derivatives are exact, so the
/// jets can be evaluated pointwise without storing fields.
class WrinkleConstruction {
 public:
  WrinkleConstruction(const ModelParams& params, const DerivedScales& scales,
                      ConstructionConfig config);

  const ConstructionConfig& config() const { return config_; }
  /// Largest angular wavenumber carried by any of the three fields.
  std::int64_t max_wavenumber() const { return 2 * config_.kmax * config_.N; }

  /// Amplitude and its first two derivatives.
  void amplitude(double r, double& A, double& A1, double& A2) const;
  /// Window indices [lo, hi] with nonzero bump at radius r (empty if lo > hi).
  void window(double r, std::int64_t& lo, std::int64_t& hi) const;

  /// Jets of (u_r, u_theta, w) at r; u_r includes the radial mean u0.
  SheetJet jet(double r) const;

  /// Discrete excess length A^2 h^delta sum m_k^2.
  double gamma(double r) const;

 private:
  ModelParams params_;
  DerivedScales scales_;
  ConstructionConfig config_;
  double hd_ = 0.0;      // h^delta
  double hdh_ = 0.0;     // h^{delta/2}
  double halpha_ = 0.0;  // h^alpha
  double slope_ = 0.0;   // k0_coeff / N, window center per unit radius
  double m2_ = 0.0;      // integral of m^2
};

/// Samples the construction into stored fields on a grid.
/// Throws CapacityError when spectral_cap > 0 and a needed wavenumber exceeds it.
SheetState build_test_state(const ModelParams& params, const DerivedScales& scales,
                            const ConstructionConfig& config,
                            std::shared_ptr<const RadialGrid> grid,
                            std::int64_t spectral_cap = 0);

/// Grid graded toward the switch-on zone of A with finest element h^alpha/8.
std::shared_ptr<const RadialGrid> construction_grid(int n, const ModelParams& params,
                                                    const DerivedScales& scales,
                                                    const ConstructionConfig& config);

struct ExcessResult {
  double value = 0.0;     ///< identity-based E - F0(u0)
  double direct = 0.0;    ///< total energy minus F0(u0)
  double f0 = 0.0;        ///< F0(u0) on the same quadrature
  double sigma_b = 0.0;   ///< integral of sigma0 B
  double b_square = 0.0;  ///< integral of B^2 / 4
  double wr_excess = 0.0; ///< integral of W_r - W_rel
  double bending_offset = 0.0;
  EnergyBreakdown energy;
};

/// Excess energy of the construction over F0(u0).
ExcessResult excess_energy(const ModelParams& params, const DerivedScales& scales,
                           const ConstructionConfig& config, const RadialGrid& grid,
                           std::int64_t spectral_cap = 0);

}  // namespace fvklab
