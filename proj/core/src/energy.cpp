#include "fvklab/energy.hpp"

#include <cmath>

#include "fvklab/errors.hpp"

namespace fvklab {

double EnergyBreakdown::remainder_sum() const {
  double s = 0.0;
  for (double v : remainder) s += v;
  return s;
}

double EnergyBreakdown::identity_defect() const {
  return std::abs(total - decomposed_total()) / std::max(1.0, std::abs(total));
}

double w_rel(double eta, const DerivedScales& scales) {
  const double p = scales.p;
  return eta >= -2.0 * p ? eta * eta : -4.0 * p * (p + eta);
}

double w_rel_prime(double eta, const DerivedScales& scales) {
  return eta >= -2.0 * scales.p ? 2.0 * eta : -4.0 * scales.p;
}

double w_r(double eta, const TrigSeries& w, double r, const ModelParams& params) {
  if (!(r > 0.0)) throw RangeError("w_r: radius must be positive");
  const double r2 = r * r;
  const double a = w.weighted_square(2) / (2.0 * r2);
  const double stretch = eta + a;
  return stretch * stretch + params.h * params.h * w.weighted_square(4) / (r2 * r2) +
         params.alpha_s * std::pow(params.h, -params.beta) * w.fluct_square();
}

double w_r_spectral(double eta, const TrigSeries& w, double r, const ModelParams& params,
                    const DerivedScales& scales) {
  if (!(r > 0.0)) throw RangeError("w_r: radius must be positive");
  const double r2 = r * r;
  const double a = w.weighted_square(2) / (2.0 * r2);
  const double bend = params.h / r;
  const double sub = std::sqrt(params.alpha_s) * r / std::pow(params.h, params.beta / 2.0);
  double mismatch = 0.0;
  for (const auto& b : w.blocks())
    for (std::size_t i = 0; i < b.size(); ++i) {
      double k = static_cast<double>((b.first + static_cast<std::int64_t>(i)) * w.stride());
      double d = bend * k - sub / k;
      mismatch += (b.cos[i] * b.cos[i] + b.sin[i] * b.sin[i]) * k * k * d * d;
    }
  const double stretch = eta + a;
  return stretch * stretch + 4.0 * scales.p * a + mismatch / r2;
}

EnergyDensity energy_density(const SheetJet& jet, double r, const ModelParams& params) {
  if (!(r > 0.0)) throw RangeError("energy_density: radius must be positive");
  const double h2 = params.h * params.h;
  const double sub = params.alpha_s * std::pow(params.h, -params.beta);
  const double r2 = r * r;
  const RadialJet& U = jet.u_r;
  const RadialJet& T = jet.u_theta;
  const RadialJet& W = jet.w;

  TrigSeries xi_r = W.d1;
  xi_r.set_mean(W.d1.mean() - r / params.R);
  const TrigSeries xi_t = W.v.d_theta();
  const TrigSeries xi_tr = W.d1.d_theta();

  TrigSeries X = product(xi_r, xi_r) * 0.5;
  X += U.d1;
  TrigSeries Y = product(xi_t, xi_t) * (0.5 / r2);
  Y += T.v.d_theta() * (1.0 / r);
  Y += U.v * (1.0 / r);
  TrigSeries S = product(xi_r, xi_t) * (1.0 / r);
  S += U.v.d_theta() * (1.0 / r);
  S += T.d1;
  S -= T.v * (1.0 / r);

  EnergyDensity d;
  d.membrane = X.mean_square() + Y.mean_square() + 0.5 * S.mean_square();
  const double xi_rr_mean = W.d2.mean() - 1.0 / params.R;
  const double theta4 = W.v.weighted_square(4);
  const double rtheta = W.d1.weighted_square(2);
  d.bending = h2 * (theta4 / (r2 * r2) + xi_rr_mean * xi_rr_mean + W.d2.fluct_square() +
                    2.0 * rtheta / r2);
  d.substrate = sub * W.v.mean_square();

  d.b = W.d1.fluct_square();
  const double slope = r / params.R - W.d1.mean();
  const double sigma = U.d1.mean() + 0.5 * slope * slope;
  const double sb = sigma + 0.5 * d.b;
  d.mean_part = sb * sb + h2 * xi_rr_mean * xi_rr_mean + sub * W.v.mean() * W.v.mean();
  d.wr = w_r(U.v.mean() / r, W.v, r, params);
  d.remainder = {X.fluct_square(), Y.fluct_square(), 0.5 * S.mean_square(),
                 h2 * W.d2.fluct_square(), 2.0 * h2 * rtheta / r2};
  return d;
}

EnergyBreakdown integrate_energy(const RadialGrid& grid,
                                 const std::function<SheetJet(std::size_t)>& jet_at_node,
                                 const ModelParams& params) {
  const auto nodes = grid.nodes();
  const auto wts = grid.weights();
  CompensatedSum mem, bend, sub, mean, wr;
  std::array<CompensatedSum, 5> rem;
  EnergyBreakdown out;
  out.b_profile.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const EnergyDensity d = energy_density(jet_at_node(i), nodes[i], params);
    const double w = wts[i];
    mem.add(w * d.membrane);
    bend.add(w * d.bending);
    sub.add(w * d.substrate);
    mean.add(w * d.mean_part);
    wr.add(w * d.wr);
    for (int k = 0; k < 5; ++k) rem[k].add(w * d.remainder[k]);
    out.b_profile[i] = d.b;
  }
  out.membrane = mem.value();
  out.bending = bend.value();
  out.substrate = sub.value();
  out.total = out.membrane + out.bending + out.substrate;
  out.mean_part = mean.value();
  out.wr_integral = wr.value();
  for (int k = 0; k < 5; ++k) out.remainder[k] = rem[k].value();
  if (!std::isfinite(out.total)) throw GridError("energy is not finite");
  return out;
}

EnergyBreakdown full_energy(const SheetState& state, const ModelParams& params,
                            const DerivedScales& /*scales*/) {
  state.validate();
  state.u_r.require_resolved();
  state.u_theta.require_resolved();
  state.w.require_resolved();
  return integrate_energy(
      state.grid(), [&](std::size_t i) { return state.jet(i); }, params);
}

std::array<double, 5> remainder(const SheetState& state, const ModelParams& params,
                                const DerivedScales& scales) {
  return full_energy(state, params, scales).remainder;
}

std::vector<double> b_profile(const AngularField& w) {
  w.require_resolved();
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w.jet(i).d1.fluct_square();
  return out;
}

}  // namespace fvklab
