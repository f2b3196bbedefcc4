#include "fvklab/scalelab.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "fvklab/construction.hpp"
#include "fvklab/digest.hpp"
#include "fvklab/energy.hpp"
#include "fvklab/errors.hpp"

namespace fvklab {

namespace {

constexpr int kQuadraturePoints = 16;

void add_params(Fnv1a& f, const ModelParams& p) {
  f.add(p.h).add(p.beta).add(p.alpha_s).add(p.r0).add(p.R);
}

void add_field(Fnv1a& f, const AngularField& w) {
  f.add(static_cast<std::uint64_t>(w.kmax())).add(static_cast<std::uint64_t>(w.stride()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    f.add(w.mean(i));
    for (std::int64_t k = 1; k <= w.kmax(); ++k) f.add(w.cos(i, k)).add(w.sin(i, k));
  }
}

double excess_at(const TrigSeries& slice, double eta, double r, const ModelParams& params,
                 const DerivedScales& scales) {
  return w_r(eta, slice, r, params) - w_rel(eta, scales);
}

LemmaCheckResult finish(double lhs, double rhs, const AngularField& w, const RadialProfile& ubar,
                        double rho0, double rho1, double de, const ModelParams& params) {
  LemmaCheckResult out;
  out.lhs = lhs;
  out.rhs = rhs;
  out.margin = lhs - rhs;
  out.pass = out.margin >= -1e-12 * (1.0 + std::abs(rhs));
  Fnv1a f;
  add_params(f, params);
  f.add(rho0).add(rho1).add(de);
  add_field(f, w);
  for (double v : ubar.values) f.add(v);
  out.inputs_digest = f.hex();
  return out;
}

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double operator()(double a, double b) { return a + (b - a) * (*this)(); }

 private:
  std::mt19937_64 gen_;
};

// Two-sided 95% Student t quantiles for 1..30 degrees of freedom.
double t_quantile(int dof) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                 2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof < 1) return 0.0;
  return dof <= 30 ? table[dof - 1] : 1.96;
}

}  // namespace

double default_lemma_margin(const ModelParams& params) {
  const double c0 = params.r0 * params.r0 / (72.0 * params.R * params.R);
  return c0 / 96.0;
}

double lemma_ws_rhs(double rho0, double rho1, double de, const ModelParams& params,
                    const DerivedScales& scales) {
  const double p = scales.p, lam = rho1 - rho0, h = params.h;
  const double a = 6.0 * std::pow(rho1, 4) / (rho0 * rho0 * p * lam * lam);
  const double b = (rho0 + rho1) * (rho0 + rho1) * lam * lam / (4.0 * rho0 * rho0 * h * h);
  return 0.5 * de * std::min(0.5 * de, 1.0 / (a + b));
}

double lemma_ws2_rhs(double rho0, double rho1, double de, const ModelParams& params,
                     const DerivedScales& scales) {
  const double p = scales.p, lam = rho1 - rho0, h = params.h;
  const double r02 = rho0 * rho0;
  double m = 0.5 * de;
  m = std::min(m, p * lam * lam / (2.0 * r02));
  if (de > 0.0) m = std::min(m, p * lam * lam * r02 / (2.0 * de * rho1 * rho1));
  const double a = 8.0 * std::pow(rho1, 4) / (r02 * p * lam * lam);
  const double b = params.alpha_s * std::pow(rho0 + rho1, 4) * std::pow(lam, 4) /
                   (2.0 * r02 * r02 * std::pow(h, 2.0 + params.beta));
  m = std::min(m, de / 8.0 / (a + b));
  return 0.5 * de * m;
}

void check_lemma_hypotheses(const RadialProfile& ubar, double rho0, double rho1, double de,
                            const ModelParams& params, const DerivedScales& scales) {
  if (!(0.0 < rho0 && rho0 < rho1 && rho1 < params.r0))
    throw HypothesisError("lemma: need 0 < rho0 < rho1 < r0");
  if (!(de >= 0.0)) throw HypothesisError("lemma: margin must be nonnegative");
  for (double rho : {rho0, rho1}) {
    const double eta = ubar.at(rho) / rho;
    if (!(eta <= -2.0 * scales.p - de))
      throw HypothesisError("lemma: ubar/r = " + std::to_string(eta) + " exceeds -2p - de at r = " +
                            std::to_string(rho));
  }
}

double lemma_wr_excess(const AngularField& w, const RadialProfile& ubar, double rho0, double rho1,
                       const ModelParams& params, const DerivedScales& scales) {
  double sum = 0.0;
  for (double rho : {rho0, rho1})
    sum += excess_at(w.jet_at(rho).v, ubar.at(rho) / rho, rho, params, scales);
  return sum;
}

double mean_b_power(const AngularField& w, double rho0, double rho1, int power) {
  if (!(rho1 > rho0)) throw RangeError("mean_b_power: empty interval");
  std::vector<double> x, wt;
  gauss_legendre(kQuadraturePoints, x, wt);
  std::vector<double> cuts{rho0};
  for (double b : w.grid()->breakpoints())
    if (b > rho0 && b < rho1) cuts.push_back(b);
  cuts.push_back(rho1);
  CompensatedSum sum;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], half = 0.5 * (cuts[s + 1] - cuts[s]);
    for (int j = 0; j < kQuadraturePoints; ++j) {
      const double B = w.jet_at(a + half * (1.0 + x[j])).d1.fluct_square();
      sum.add(half * wt[j] * std::pow(B, power));
    }
  }
  return sum.value() / (rho1 - rho0);
}

LemmaCheckResult lemma_ws(const AngularField& w, const RadialProfile& ubar, double rho0,
                          double rho1, double de, const ModelParams& params,
                          const DerivedScales& scales) {
  check_lemma_hypotheses(ubar, rho0, rho1, de, params, scales);
  const double lhs = lemma_wr_excess(w, ubar, rho0, rho1, params, scales) +
                     scales.p * mean_b_power(w, rho0, rho1, 1);
  return finish(lhs, lemma_ws_rhs(rho0, rho1, de, params, scales), w, ubar, rho0, rho1, de,
                params);
}

LemmaCheckResult lemma_ws2(const AngularField& w, const RadialProfile& ubar, double rho0,
                           double rho1, double de, const ModelParams& params,
                           const DerivedScales& scales) {
  check_lemma_hypotheses(ubar, rho0, rho1, de, params, scales);
  const double lhs =
      lemma_wr_excess(w, ubar, rho0, rho1, params, scales) + mean_b_power(w, rho0, rho1, 2);
  return finish(lhs, lemma_ws2_rhs(rho0, rho1, de, params, scales), w, ubar, rho0, rho1, de,
                params);
}

double lemma_ws_matched_length(double rho0, const ModelParams& params,
                               const DerivedScales& scales) {
  // Fixed point of lambda^4 = 24 rho1^4 h^2 / (p (rho0 + rho1)^2), rho1 = rho0 + lambda.
  double lam = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double rho1 = rho0 + lam;
    const double next = std::pow(24.0 * std::pow(rho1, 4) * params.h * params.h /
                                     (scales.p * (rho0 + rho1) * (rho0 + rho1)),
                                 0.25);
    if (std::abs(next - lam) <= 1e-15 * next) return next;
    lam = next;
  }
  return lam;
}

double lemma_ws2_matched_length(double rho0, const ModelParams& params,
                                const DerivedScales& scales) {
  // lambda^6 = 16 rho1^4 rho0^2 h^{2+beta} / (p alpha_s (rho0 + rho1)^4).
  double lam = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double rho1 = rho0 + lam;
    const double next =
        std::pow(16.0 * std::pow(rho1, 4) * rho0 * rho0 * std::pow(params.h, 2.0 + params.beta) /
                     (scales.p * params.alpha_s * std::pow(rho0 + rho1, 4)),
                 1.0 / 6.0);
    if (std::abs(next - lam) <= 1e-15 * next) return next;
    lam = next;
  }
  return lam;
}

std::pair<double, double> select_radii(const AngularField& w, const RadialProfile& ubar,
                                       double center, double half, double de,
                                       const ModelParams& params, const DerivedScales& scales) {
  const auto nodes = w.grid()->nodes();
  auto best_in = [&](double a, double b) {
    double best = -1.0, best_val = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double r = nodes[i];
      if (r < a || r > b) continue;
      const double eta = ubar.values[i] / r;
      if (eta > -2.0 * scales.p - de) continue;
      const double v = excess_at(w.slice(i), eta, r, params, scales);
      if (best < 0.0 || v < best_val) {
        best = r;
        best_val = v;
      }
    }
    if (best < 0.0) throw HypothesisError("select_radii: no admissible node in half-interval");
    return best;
  };
  const double rho0 = best_in(center - half, center);
  const double rho1 = best_in(center, center + half);
  if (!(rho0 < rho1)) throw HypothesisError("select_radii: radii coincide");
  return {rho0, rho1};
}

RandomWrinkleField random_wrinkle_field(std::uint64_t seed, const ModelParams& params,
                                        const DerivedScales& scales, double lo, double hi,
                                        double de, RandomFieldOptions options) {
  const double r0 = params.r0;
  if (!(lo >= 0.5 * r0 && hi <= r0 && lo < hi))
    throw RangeError("random_wrinkle_field: window must lie in [r0/2, r0]");
  if (options.elements < 1) throw RangeError("random_wrinkle_field: need at least one element");

  std::vector<double> bp{0.0};
  for (int i = 0; i <= options.elements; ++i)
    bp.push_back(0.5 * r0 * (1.0 + static_cast<double>(i) / options.elements));
  auto grid = std::make_shared<const RadialGrid>(RadialGrid::from_breakpoints(bp));

  const ConstructionConfig cfg = default_config(params, scales);
  const double half_width = 0.5 * static_cast<double>(cfg.N) * std::pow(params.h, -cfg.delta);

  Uniform u(seed);
  const double offset = u(-0.5, 0.5) * half_width;
  const double width = std::max(2.0, u(0.25, 0.5) * half_width);
  const bool second = u() < 0.5;
  const double second_ratio = u(0.3, 1.8);
  const double second_weight = u(0.0, 1.0);
  const double second_width = std::max(2.0, u(0.1, 0.5) * half_width);
  const double phase_drift = u(-2.0, 2.0);
  const double a0 = u(0.0, 2.5), a1 = u(0.0, 0.5) * a0;
  const double om = u(2.0, 12.0), psi = u(0.0, 2.0 * M_PI);
  const double s0 = u(0.01, 3.0) * de, s1 = u(0.0, 1.0) * de;
  const double om2 = u(2.0, 12.0), psi2 = u(0.0, 2.0 * M_PI);

  const double k0_top = scales.k0(r0);
  const std::int64_t kmax = static_cast<std::int64_t>(
      std::ceil(std::max(k0_top + std::abs(offset), 1.8 * k0_top) + 9.0 * std::max(width, second_width))) + 1;
  std::vector<double> phase(static_cast<std::size_t>(kmax)), phase2(static_cast<std::size_t>(kmax));
  for (auto& ph : phase) ph = u(0.0, 2.0 * M_PI);
  for (auto& ph : phase2) ph = u(0.0, 2.0 * M_PI);

  RandomWrinkleField out{AngularField(grid, kmax), RadialProfile{grid, {}, {}, {}}, seed, offset,
                         half_width, {}};
  const auto nodes = grid->nodes();
  out.ubar.values.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = nodes[i];
    const double s = std::max(0.0, s0 + s1 * (1.0 + std::sin(om2 * r + psi2)));
    const double eta = -2.0 * scales.p - de - s;
    out.ubar.values[i] = r * eta;
    if (r < 0.5 * r0) continue;

    std::vector<double> c(static_cast<std::size_t>(kmax), 0.0), sn(c);
    auto packet = [&](double center, double wd, double weight, const std::vector<double>& ph) {
      const auto k_lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(center - 9.0 * wd)));
      const auto k_hi = std::min<std::int64_t>(kmax, static_cast<std::int64_t>(std::ceil(center + 9.0 * wd)));
      for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const double x = (static_cast<double>(k) - center) / wd;
        const double g = weight * std::exp(-0.5 * x * x);
        const double th = ph[static_cast<std::size_t>(k - 1)] + phase_drift * r;
        c[static_cast<std::size_t>(k - 1)] += g * std::cos(th);
        sn[static_cast<std::size_t>(k - 1)] += g * std::sin(th);
      }
    };
    packet(scales.k0(r) + offset, width, 1.0, phase);
    if (second) packet(second_ratio * scales.k0(r), second_width, second_weight, phase2);

    double raw = 0.0;
    for (std::int64_t k = 1; k <= kmax; ++k) {
      const auto j = static_cast<std::size_t>(k - 1);
      raw += static_cast<double>(k * k) * (c[j] * c[j] + sn[j] * sn[j]);
    }
    raw /= 2.0 * r * r;
    const double target = (de + s) * (a0 + a1 * std::sin(om * r + psi));
    const double scale = raw > 0.0 ? std::sqrt(std::max(0.0, target) / raw) : 0.0;
    for (std::int64_t k = 1; k <= kmax; ++k) {
      const auto j = static_cast<std::size_t>(k - 1);
      out.w.cos(i, k) = scale * c[j];
      out.w.sin(i, k) = scale * sn[j];
    }
  }

  Fnv1a f;
  f.add(seed);
  add_params(f, params);
  f.add(lo).add(hi).add(de);
  add_field(f, out.w);
  for (double v : out.ubar.values) f.add(v);
  out.digest = f.hex();
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(FitModel model) {
  return model == FitModel::power ? "power" : "power_log";
}

PowerFit fit_powerlaw(const std::vector<std::pair<double, double>>& points, FitModel model) {
  const int cols = model == FitModel::power ? 2 : 3;
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < cols) throw FitError("fit_powerlaw: too few points");
  Eigen::MatrixXd X(n, cols);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [h, v] = points[static_cast<std::size_t>(i)];
    if (!(h > 0.0) || !(v > 0.0) || !std::isfinite(v))
      throw FitError("fit_powerlaw: values must be positive and finite");
    X(i, 0) = std::log(h);
    X(i, 1) = 1.0;
    if (cols == 3) {
      if (h == 1.0) throw FitError("fit_powerlaw: log|log h| undefined at h = 1");
      X(i, 2) = std::log(std::abs(std::log(h)));
    }
    y(i) = std::log(v);
  }
  const auto qr = X.colPivHouseholderQr();
  if (qr.rank() < cols) throw FitError("fit_powerlaw: degenerate design");
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd res = y - X * beta;

  PowerFit fit;
  fit.slope = beta(0);
  fit.intercept = beta(1);
  if (cols == 3) fit.log_coeff = beta(2);
  for (Eigen::Index i = 0; i < n; ++i)
    fit.residual = std::max(fit.residual, std::abs(std::expm1(-res(i))));
  const auto dof = static_cast<int>(n) - cols;
  if (dof > 0) {
    const double s2 = res.squaredNorm() / dof;
    const Eigen::MatrixXd cov = (X.transpose() * X).inverse() * s2;
    fit.slope_ci = t_quantile(dof) * std::sqrt(std::max(0.0, cov(0, 0)));
  }
  return fit;
}

SweepMode parse_sweep_mode(const std::string& name) {
  if (name == "construction") return SweepMode::construction;
  if (name == "relaxed-gap") return SweepMode::relaxed_gap;
  if (name == "f0-scaling") return SweepMode::f0_scaling;
  throw RangeError("unknown sweep mode '" + name + "'");
}

std::string to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::construction: return "construction";
    case SweepMode::relaxed_gap: return "relaxed-gap";
    case SweepMode::f0_scaling: return "f0-scaling";
  }
  return "?";
}

double theory_slope(SweepMode mode, double beta) {
  switch (mode) {
    case SweepMode::construction: return exponents::excess_upper(beta);
    case SweepMode::relaxed_gap: return exponents::relaxed_gap;
    case SweepMode::f0_scaling: return exponents::relaxed(beta);
  }
  return 0.0;
}

double sweep_value(SweepMode mode, const ModelParams& params, const SweepOptions& options) {
  const DerivedScales scales = validate_and_derive(params);
  switch (mode) {
    case SweepMode::construction: {
      const ConstructionConfig cfg = default_config(params, scales, options.q);
      const int n = options.n_radial > 0 ? options.n_radial : 1000;
      auto grid = construction_grid(n, params, scales, cfg);
      return excess_energy(params, scales, cfg, *grid).value;
    }
    case SweepMode::relaxed_gap: {
      const int n = options.n_radial > 0 ? options.n_radial : 512;
      return minimize_Fh(params, scales, relaxed_grid(n, params, scales)).gap;
    }
    case SweepMode::f0_scaling: {
      const int n = options.n_radial > 0 ? options.n_radial : 512;
      return eval_F0(sample_u0(relaxed_grid(n, params, scales), params, scales), params, scales);
    }
  }
  return 0.0;
}

ScalingReport sweep_excess(const ModelParams& params, std::vector<double> h_list, SweepMode mode,
                           const SweepOptions& options) {
  std::sort(h_list.begin(), h_list.end());
  h_list.erase(std::unique(h_list.begin(), h_list.end()), h_list.end());
  if (h_list.size() < 6) throw RangeError("sweep: need at least 6 distinct h values");
  if (!(h_list.front() > 0.0) || h_list.back() / h_list.front() < 100.0 * (1.0 - 1e-12))
    throw RangeError("sweep: h values must span at least two decades");

  const std::size_t n = h_list.size();
  std::vector<double> values(n, 0.0);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        ModelParams p = params;
        p.h = h_list[i];
        values[i] = sweep_value(mode, p, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(options.jobs, 1, static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ScalingReport rep;
  rep.mode = mode;
  rep.params = params;
  for (std::size_t i = 0; i < n; ++i) rep.points.emplace_back(h_list[i], values[i]);
  const PowerFit fit = fit_powerlaw(rep.points, FitModel::power);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.residual = fit.residual;
  rep.slope_ci = fit.slope_ci;
  rep.log_fit = fit_powerlaw(rep.points, FitModel::power_log);
  rep.theory = theory_slope(mode, params.beta);
  if (rep.residual > options.max_residual)
    throw FitError("sweep: power-law residual " + std::to_string(rep.residual) +
                   " exceeds tolerance");
  return rep;
}

std::vector<double> log_space(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > 0.0) || count < 1) throw RangeError("log_space: invalid range");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace fvklab
