#include "fvklab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fvklab/errors.hpp"
#include "fvklab/relaxed.hpp"

namespace fvklab {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double psi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double psi_d1(double s) { return s > 0.0 ? psi(s) / (s * s) : 0.0; }
double psi_d2(double s) {
  return s > 0.0 ? psi(s) * (1.0 / (s * s * s * s) - 2.0 / (s * s * s)) : 0.0;
}

// Pair sums over a window of indices lo..lo+W-1.
//   plus[n - 2 lo] = sum_{k+j=n} f_k g_j
//   sym[n]         = sum_{|k-j|=n} f_k g_j          (n >= 1)
//   anti[n]        = sum_{k-j=n} f_k g_j - sum_{j-k=n} f_k g_j
struct PairSums {
  std::vector<double> plus, sym, anti;
};

PairSums pair_sums(const std::vector<double>& f, const std::vector<double>& g) {
  const std::size_t W = f.size();
  PairSums s;
  s.plus.assign(2 * W - 1, 0.0);
  s.sym.assign(W, 0.0);
  s.anti.assign(W, 0.0);
  for (std::size_t a = 0; a < W; ++a) {
    if (f[a] == 0.0) continue;
    for (std::size_t b = 0; b < W; ++b) {
      const double v = f[a] * g[b];
      s.plus[a + b] += v;
      if (a > b) {
        s.sym[a - b] += v;
        s.anti[a - b] += v;
      } else if (b > a) {
        s.sym[b - a] += v;
        s.anti[b - a] -= v;
      }
    }
  }
  return s;
}

}  // namespace

double bump(double t) {
  const double u = 1.0 - 4.0 * t * t;
  return u > 0.0 ? std::exp(-1.0 / u) : 0.0;
}

double bump_d1(double t) {
  const double u = 1.0 - 4.0 * t * t;
  return u > 0.0 ? -8.0 * t * std::exp(-1.0 / u) / (u * u) : 0.0;
}

double bump_d2(double t) {
  const double u = 1.0 - 4.0 * t * t;
  if (u <= 0.0) return 0.0;
  const double m = std::exp(-1.0 / u);
  const double m1 = -8.0 * t * m / (u * u);
  return -8.0 * m / (u * u) - 8.0 * t * m1 / (u * u) - 128.0 * t * t * m / (u * u * u);
}

double bump_square_integral() {
  // The trapezoid rule is spectrally accurate for this flat-ended integrand.
  static const double value = [] {
    const int n = 4000;
    const double dt = 1.0 / n;
    CompensatedSum s;
    for (int i = 1; i < n; ++i) {
      const double m = bump(-0.5 + i * dt);
      s.add(m * m);
    }
    return s.value() * dt;
  }();
  return value;
}

double cutoff(double t) {
  const double a = psi(t - 1.0), b = psi(2.0 - t);
  return a / (a + b);
}

double cutoff_d1(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double a = psi(t - 1.0), b = psi(2.0 - t);
  const double a1 = psi_d1(t - 1.0), b1 = -psi_d1(2.0 - t);
  const double s = a + b;
  return (a1 * b - a * b1) / (s * s);
}

double cutoff_d2(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double a = psi(t - 1.0), b = psi(2.0 - t);
  const double a1 = psi_d1(t - 1.0), b1 = -psi_d1(2.0 - t);
  const double a2 = psi_d2(t - 1.0), b2 = psi_d2(2.0 - t);
  const double s = a + b;
  const double num = a1 * b - a * b1;
  return (a2 * b - a * b2) / (s * s) - 2.0 * num * (a1 + b1) / (s * s * s);
}

double sum_vs_integral(const std::function<double(double)>& f, double support_lo,
                       double support_hi, double integral, double t, double zeta) {
  if (!(t > 0.0 && t < 1.0)) throw RangeError("sum_vs_integral: t must lie in (0, 1)");
  if (!(support_hi > support_lo)) throw RangeError("sum_vs_integral: empty support");
  const auto k0 = static_cast<std::int64_t>(std::floor((support_lo - zeta) / t));
  const auto k1 = static_cast<std::int64_t>(std::ceil((support_hi - zeta) / t));
  CompensatedSum s;
  for (std::int64_t k = k0; k <= k1; ++k) s.add(f(t * static_cast<double>(k) + zeta));
  return std::abs(t * s.value() - integral);
}

double sum_vs_integral_bump_square(double t, double zeta) {
  return sum_vs_integral([](double x) { double m = bump(x); return m * m; }, -0.5, 0.5,
                         bump_square_integral(), t, zeta);
}

ConstructionConfig default_config(const ModelParams& params, const DerivedScales& scales,
                                  double q) {
  if (!(q > 0.0)) throw RangeError("default_config: q must be positive");
  ConstructionConfig c;
  const double h = params.h;
  const double L = std::log(1.0 / h);
  c.q = q;
  c.delta = q * std::log(L) / L;
  if (params.beta >= 2.0 / 3.0) {
    c.ell = std::pow(h, (2.0 + params.beta) / 8.0);
    c.alpha = (6.0 - params.beta) / 8.0;
  } else {
    c.ell = std::pow(h, 1.0 / 3.0);
    c.alpha = (14.0 - params.beta) / 18.0;
  }
  const double hd = std::pow(h, c.delta);
  c.N = std::max<std::int64_t>(1, std::llround(hd / c.ell));
  c.kmax = static_cast<std::int64_t>(
      std::floor(scales.k0_coeff * params.r0 / static_cast<double>(c.N) + 0.5 / hd));
  return c;
}

WrinkleConstruction::WrinkleConstruction(const ModelParams& params, const DerivedScales& scales,
                                         ConstructionConfig config)
    : params_(params), scales_(scales), config_(config) {
  if (config_.N < 1) throw RangeError("construction: N must be a positive integer");
  if (!(config_.delta > 0.0)) throw RangeError("construction: delta must be positive");
  hd_ = std::pow(params.h, config_.delta);
  hdh_ = std::sqrt(hd_);
  halpha_ = std::pow(params.h, config_.alpha);
  if (!(halpha_ <= scales.r_h / 8.0))
    throw RangeError("construction: cutoff width h^alpha exceeds r_h/8");
  slope_ = scales.k0_coeff / static_cast<double>(config_.N);
  m2_ = bump_square_integral();
  std::int64_t lo = 0, hi = 0;
  window(scales.r_h, lo, hi);
  if (lo > hi) throw RangeError("construction: empty frequency window at r_h");
  window(params.r0, lo, hi);
  if (hi > config_.kmax)
    throw CapacityError("construction: window reaches index " + std::to_string(hi) +
                        " beyond kmax " + std::to_string(config_.kmax));
}

void WrinkleConstruction::amplitude(double r, double& A, double& A1, double& A2) const {
  A = A1 = A2 = 0.0;
  const double s = (r - scales_.r_h) / halpha_;
  if (s <= 1.0) return;
  const double g0 = gamma0(r, params_, scales_);
  const double g1 = gamma0_prime(r, params_, scales_);
  const double g2 = gamma0_second(r, params_, scales_);
  const double g = std::sqrt(g0 / m2_);
  const double gd1 = g1 / (2.0 * std::sqrt(g0 * m2_));
  const double gd2 = g2 / (2.0 * std::sqrt(g0 * m2_)) - g1 * g1 / (4.0 * g0 * std::sqrt(g0 * m2_));
  const double e = cutoff(s), e1 = cutoff_d1(s) / halpha_, e2 = cutoff_d2(s) / (halpha_ * halpha_);
  A = e * g;
  A1 = e1 * g + e * gd1;
  A2 = e2 * g + 2.0 * e1 * gd1 + e * gd2;
}

void WrinkleConstruction::window(double r, std::int64_t& lo, std::int64_t& hi) const {
  const double c = slope_ * r;
  const double half = 0.5 / hd_;
  lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(c - half)) + 1);
  hi = static_cast<std::int64_t>(std::ceil(c + half)) - 1;
}

double WrinkleConstruction::gamma(double r) const {
  double A, A1, A2;
  amplitude(r, A, A1, A2);
  if (A == 0.0) return 0.0;
  std::int64_t lo, hi;
  window(r, lo, hi);
  CompensatedSum s;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double m = bump(hd_ * (static_cast<double>(k) - slope_ * r));
    s.add(m * m);
  }
  return A * A * hd_ * s.value();
}

SheetJet WrinkleConstruction::jet(double r) const {
  const std::int64_t N = config_.N;
  const double Nd = static_cast<double>(N);
  SheetJet J;
  J.u_r.v = TrigSeries(closed_form_u0(r, params_, scales_), N);
  J.u_r.d1 = TrigSeries(closed_form_u0_prime(r, params_, scales_), N);
  J.u_r.d2 = TrigSeries(closed_form_u0_second(r, params_, scales_), N);
  J.u_theta.v = J.u_theta.d1 = J.u_theta.d2 = TrigSeries(0.0, N);
  J.w.v = J.w.d1 = J.w.d2 = TrigSeries(0.0, N);

  double A, A1, A2;
  amplitude(r, A, A1, A2);
  if (A == 0.0 && A1 == 0.0 && A2 == 0.0) return J;
  // Modes are 2 cos(kN theta), i.e. sqrt2 times the orthonormal basis, so
  // that the average of |d_theta w|^2 / (2 r^2) equals gamma.
  A *= kSqrt2;
  A1 *= kSqrt2;
  A2 *= kSqrt2;
  std::int64_t lo, hi;
  window(r, lo, hi);
  if (lo > hi) return J;
  const std::size_t W = static_cast<std::size_t>(hi - lo + 1);

  // Bump values and their radial derivatives; t_k = h^delta (k - slope r).
  const double dt = -hd_ * slope_;
  std::vector<double> m(W), mr(W), mrr(W);
  for (std::size_t i = 0; i < W; ++i) {
    const double t = hd_ * (static_cast<double>(lo + static_cast<std::int64_t>(i)) - slope_ * r);
    m[i] = bump(t);
    mr[i] = bump_d1(t) * dt;
    mrr[i] = bump_d2(t) * dt * dt;
  }

  // M_k = A r m_k and radial derivatives.
  const double Ar = A * r, Ar1 = A1 * r + A, Ar2 = A2 * r + 2.0 * A1;
  std::vector<double> M(W), M1(W), M2(W), M1k(W), M2k(W);
  for (std::size_t i = 0; i < W; ++i) {
    M[i] = Ar * m[i];
    M1[i] = Ar1 * m[i] + Ar * mr[i];
    M2[i] = Ar2 * m[i] + 2.0 * Ar1 * mr[i] + Ar * mrr[i];
    const double k = static_cast<double>(lo + static_cast<std::int64_t>(i));
    M1k[i] = M1[i] / k;
    M2k[i] = M2[i] / k;
  }

  {
    std::vector<double> c0(W), c1(W), c2(W);
    for (std::size_t i = 0; i < W; ++i) {
      const double kN = static_cast<double>(lo + static_cast<std::int64_t>(i)) * Nd;
      c0[i] = hdh_ * M[i] / kN;
      c1[i] = hdh_ * M1[i] / kN;
      c2[i] = hdh_ * M2[i] / kN;
    }
    const std::vector<double> zero(W, 0.0);
    J.w.v.add_band(lo, c0.data(), zero.data(), W);
    J.w.d1.add_band(lo, c1.data(), zero.data(), W);
    J.w.d2.add_band(lo, c2.data(), zero.data(), W);
  }

  const PairSums S = pair_sums(m, m);
  const PairSums S1 = pair_sums(mr, m);
  const PairSums Srr = pair_sums(mrr, m);
  const PairSums Sr2 = pair_sums(mr, mr);
  const PairSums V0 = pair_sums(M1k, M);
  const PairSums Va = pair_sums(M2k, M);
  const PairSums Vb = pair_sums(M1k, M1);

  const double A2sq = A * A, A2sq1 = 2.0 * A * A1, A2sq2 = 2.0 * A1 * A1 + 2.0 * A * A2;
  const double P = A2sq * r * hd_, P1 = (A2sq1 * r + A2sq) * hd_;
  const double r2 = r * r;

  // Coefficient of index n in u_theta, U_r + V_r and radial derivatives.
  auto fill = [&](std::int64_t n, double s, double s1, double s2, double s11, double v0,
                  double v1, double& ut, double& ut1, double& ur, double& ur1) {
    const double nd = static_cast<double>(n);
    const double nN = nd * Nd;
    ut = P * s / (2.0 * kSqrt2 * nN);
    ut1 = (P1 * s + 2.0 * P * s1) / (2.0 * kSqrt2 * nN);
    const double Q = A2sq1 * s + 2.0 * A2sq * s1;
    const double Q1 = A2sq2 * s + 4.0 * A2sq1 * s1 + A2sq * (2.0 * s2 + 2.0 * s11);
    const double cu = hd_ / (2.0 * kSqrt2 * nN * nN);
    const double cv = -hd_ / (kSqrt2 * Nd * nN);
    ur = cu * r2 * Q + cv * v0;
    ur1 = cu * (2.0 * r * Q + r2 * Q1) + cv * v1;
  };

  const std::vector<double> zero_plus(2 * W - 1, 0.0);
  std::vector<double> ut(2 * W - 1), ut1(2 * W - 1), ur(2 * W - 1), ur1(2 * W - 1);
  for (std::size_t i = 0; i + 1 < 2 * W; ++i) {
    const std::int64_t n = 2 * lo + static_cast<std::int64_t>(i);
    fill(n, S.plus[i], S1.plus[i], Srr.plus[i], Sr2.plus[i], V0.plus[i],
         Va.plus[i] + Vb.plus[i], ut[i], ut1[i], ur[i], ur1[i]);
  }
  J.u_theta.v.add_band(2 * lo, zero_plus.data(), ut.data(), 2 * W - 1);
  J.u_theta.d1.add_band(2 * lo, zero_plus.data(), ut1.data(), 2 * W - 1);
  J.u_r.v.add_band(2 * lo, ur.data(), zero_plus.data(), 2 * W - 1);
  J.u_r.d1.add_band(2 * lo, ur1.data(), zero_plus.data(), 2 * W - 1);

  if (W > 1) {
    const std::size_t D = W - 1;
    const std::vector<double> zero_minus(D, 0.0);
    std::vector<double> mt(D), mt1(D), mu(D), mu1(D);
    for (std::size_t n = 1; n < W; ++n) {
      fill(static_cast<std::int64_t>(n), S.sym[n], S1.sym[n], Srr.sym[n], Sr2.sym[n],
           V0.anti[n], Va.anti[n] + Vb.anti[n], mt[n - 1], mt1[n - 1], mu[n - 1], mu1[n - 1]);
    }
    J.u_theta.v.add_band(1, zero_minus.data(), mt.data(), D, -1.0);
    J.u_theta.d1.add_band(1, zero_minus.data(), mt1.data(), D, -1.0);
    J.u_r.v.add_band(1, mu.data(), zero_minus.data(), D, -1.0);
    J.u_r.d1.add_band(1, mu1.data(), zero_minus.data(), D, -1.0);
  }

  // u_r picks up (r/R) w.
  const double rR = r / params_.R;
  J.u_r.v += J.w.v * rR;
  J.u_r.d1 += J.w.v * (1.0 / params_.R) + J.w.d1 * rR;
  J.u_r.v.set_mean(closed_form_u0(r, params_, scales_));
  J.u_r.d1.set_mean(closed_form_u0_prime(r, params_, scales_));
  return J;
}

AmplitudeProfile amplitude_profile(const ModelParams& params, const DerivedScales& scales,
                                   const ConstructionConfig& config, const RadialGrid& grid) {
  const WrinkleConstruction c(params, scales, config);
  const double m2 = bump_square_integral();
  AmplitudeProfile out;
  for (double r : grid.nodes()) {
    double A, A1, A2;
    c.amplitude(r, A, A1, A2);
    out.A.push_back(A);
    out.gamma0.push_back(gamma0(r, params, scales));
    out.gamma_tilde.push_back(A * A * m2);
    out.gamma.push_back(c.gamma(r));
  }
  return out;
}

SheetState build_test_state(const ModelParams& params, const DerivedScales& scales,
                            const ConstructionConfig& config,
                            std::shared_ptr<const RadialGrid> grid, std::int64_t spectral_cap) {
  const WrinkleConstruction c(params, scales, config);
  if (spectral_cap > 0 && c.max_wavenumber() > spectral_cap)
    throw CapacityError("construction needs wavenumber " + std::to_string(c.max_wavenumber()) +
                        " beyond the cutoff " + std::to_string(spectral_cap));
  const std::int64_t K = 2 * config.kmax;
  SheetState s = SheetState::zeros(grid, K, config.N);
  const auto nodes = grid->nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const SheetJet J = c.jet(nodes[i]);
    auto store = [&](AngularField& f, const TrigSeries& t) {
      f.mean(i) = t.mean();
      for (const auto& b : t.blocks())
        for (std::size_t j = 0; j < b.size(); ++j) {
          const std::int64_t k = b.first + static_cast<std::int64_t>(j);
          if (k > K) throw CapacityError("construction: mode index beyond storage");
          f.cos(i, k) = b.cos[j];
          f.sin(i, k) = b.sin[j];
        }
    };
    store(s.u_r, J.u_r.v);
    store(s.u_theta, J.u_theta.v);
    store(s.w, J.w.v);
  }
  return s;
}

std::shared_ptr<const RadialGrid> construction_grid(int n, const ModelParams& params,
                                                    const DerivedScales& scales,
                                                    const ConstructionConfig& config) {
  const double ha = std::pow(params.h, config.alpha);
  const GradingFocus focus{scales.r_h + 1.5 * ha, ha / 8.0};
  for (double growth : {1.1, 1.2, 1.4, 2.0}) {
    try {
      return std::make_shared<const RadialGrid>(
          build_grid(n, params.r0, GridScheme::graded, std::span(&focus, 1), growth));
    } catch (const GridError&) {
    }
  }
  throw GridError("construction_grid: n too small to resolve the cutoff zone");
}

ExcessResult excess_energy(const ModelParams& params, const DerivedScales& scales,
                           const ConstructionConfig& config, const RadialGrid& grid,
                           std::int64_t spectral_cap) {
  const WrinkleConstruction c(params, scales, config);
  if (spectral_cap > 0 && c.max_wavenumber() > spectral_cap)
    throw CapacityError("construction needs wavenumber " + std::to_string(c.max_wavenumber()) +
                        " beyond the cutoff " + std::to_string(spectral_cap));
  const auto nodes = grid.nodes();
  const auto wts = grid.weights();
  CompensatedSum f0, sb, b2, wrx;
  ExcessResult out;
  out.energy = integrate_energy(
      grid,
      [&](std::size_t i) {
        const double r = nodes[i];
        SheetJet J = c.jet(r);
        const double s0 = sigma0(r, params, scales);
        const double eta = J.u_r.v.mean() / r;
        const double b = J.w.d1.fluct_square();
        const double wq = wts[i];
        f0.add(wq * (s0 * s0 + w_rel(eta, scales)));
        sb.add(wq * s0 * b);
        b2.add(wq * 0.25 * b * b);
        wrx.add(wq * (w_r(eta, J.w.v, r, params) - w_rel(eta, scales)));
        return J;
      },
      params);
  out.f0 = f0.value();
  out.sigma_b = sb.value();
  out.b_square = b2.value();
  out.wr_excess = wrx.value();
  CompensatedSum wsum;
  for (double w : wts) wsum.add(w);
  out.bending_offset = params.h * params.h / (params.R * params.R) * wsum.value();
  out.direct = out.energy.total - out.f0;
  out.value = out.sigma_b + out.b_square + out.wr_excess + out.energy.remainder_sum() +
              out.bending_offset;
  return out;
}

}  // namespace fvklab
