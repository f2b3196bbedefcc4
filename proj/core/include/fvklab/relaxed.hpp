#pragma once

#include <memory>
#include <vector>

#include "fvklab/model.hpp"

namespace fvklab {

/// A function of r sampled at the nodes of a grid. Empty derivative arrays
/// mean "not available"; they are then obtained by element-local
/// differentiation of the values.
struct RadialProfile {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> values;
  std::vector<double> d1;
  std::vector<double> d2;

  std::vector<double> first_derivative() const;
  std::vector<double> second_derivative() const;
  /// Element-local interpolant of the values at r.
  double at(double r) const;
};

/// Piecewise-cubic Hermite data: value and slope at every grid breakpoint.
struct HermiteProfile {
  std::vector<double> value;
  std::vector<double> slope;

  /// Value, first and second derivative at r.
  void eval(const RadialGrid& grid, double r, double& f, double& f1, double& f2) const;
  RadialProfile sample(std::shared_ptr<const RadialGrid> grid) const;
};

// Closed-form relaxed minimizer and related profiles.
double closed_form_u0(double r, const ModelParams& params, const DerivedScales& scales);
double closed_form_u0_prime(double r, const ModelParams& params, const DerivedScales& scales);
double closed_form_u0_second(double r, const ModelParams& params, const DerivedScales& scales);
/// sigma0 = u0' + r^2/(2R^2).
double sigma0(double r, const ModelParams& params, const DerivedScales& scales);
/// gamma0 = -(u0/r + 2p): arclength to be wasted by wrinkles, positive past r_h.
double gamma0(double r, const ModelParams& params, const DerivedScales& scales);
double gamma0_prime(double r, const ModelParams& params, const DerivedScales& scales);
double gamma0_second(double r, const ModelParams& params, const DerivedScales& scales);

RadialProfile sample_u0(std::shared_ptr<const RadialGrid> grid, const ModelParams& params,
                        const DerivedScales& scales);
RadialProfile sigma0_profile(const DerivedScales& scales, std::shared_ptr<const RadialGrid> grid,
                             const ModelParams& params);
HermiteProfile hermite_u0(const RadialGrid& grid, const ModelParams& params,
                          const DerivedScales& scales);

/// Quadrature of (v' + r^2/(2R^2))^2 + W_rel(v/r) against r dr.
double eval_F0(const RadialProfile& v, const ModelParams& params, const DerivedScales& scales);
/// Quadrature of the two-field functional (sigma^2, no positive part).
double eval_Fh(const RadialProfile& v, const RadialProfile& omega, const ModelParams& params,
               const DerivedScales& scales);

struct SolverOptions {
  int max_iterations = 10000;
  /// Bound on the gradient norm in Jacobi-scaled unknowns, relative to 1 + |F|.
  double gradient_tol = 1e-10;
};

enum class InitialGuess { closed_form, zero };

struct F0Solution {
  RadialProfile v;
  HermiteProfile dofs;
  double energy = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
};

struct RelaxedSolution {
  RadialProfile v;
  RadialProfile omega;
  std::vector<double> sigma;  ///< v' + (r/R - omega')^2 / 2 at the grid nodes
  HermiteProfile v_dofs, omega_dofs;
  double energy = 0.0;     ///< F_h at the minimizer
  double energy_u0 = 0.0;  ///< F_h at (interpolated u0, 0)
  double gap = 0.0;        ///< energy_u0 - energy
  int iterations = 0;
  double gradient_norm = 0.0;
};

/// Newton minimization of the discretized F0 in the Hermite space of the grid.
F0Solution minimize_F0(const ModelParams& params, const DerivedScales& scales,
                       std::shared_ptr<const RadialGrid> grid, SolverOptions options = {},
                       InitialGuess guess = InitialGuess::closed_form);

/// Minimizes the convexified two-field functional (positive part of the
/// stress) with v(0) = 0 and free ends for omega.
RelaxedSolution minimize_Fh(const ModelParams& params, const DerivedScales& scales,
                            std::shared_ptr<const RadialGrid> grid, SolverOptions options = {});

/// Grid for the relaxed problems: graded toward 0, r_h and r0 at the
/// omega boundary-layer scale, with r_h as an element breakpoint.
std::shared_ptr<const RadialGrid> relaxed_grid(int n, const ModelParams& params,
                                               const DerivedScales& scales);

/// sup |sigma - 2p(r0/r - 1)| / sup |2p(r0/r - 1)| over nodes in [r0/2, r0].
double sigma_outer_error(const RelaxedSolution& sol, const ModelParams& params,
                         const DerivedScales& scales);

}  // namespace fvklab
