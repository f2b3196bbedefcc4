#include "fvklab/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "fvklab/errors.hpp"

namespace fvklab {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw RangeError("config: bad number for '" + key + "': " + text);
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') throw RangeError("config: bad integer for '" + key + "': " + text);
  return v;
}

}  // namespace

double stiffness_bound(const ModelParams& params) {
  return std::pow(params.r0, 4) / (729.0 * 256.0 * std::pow(params.R, 4));
}

bool in_domain(const ModelParams& params) {
  return std::isfinite(params.h) && params.h > 0.0 && params.h < 1.0 &&
         std::isfinite(params.beta) && params.beta > 0.0 && params.beta <= 2.0 &&
         finite_positive(params.alpha_s) && finite_positive(params.r0) && finite_positive(params.R);
}

DerivedScales derive_scales(const ModelParams& params) {
  if (!in_domain(params)) {
    std::ostringstream msg;
    msg << "parameters out of domain (h=" << params.h << ", beta=" << params.beta
        << ", alpha_s=" << params.alpha_s << ", r0=" << params.r0 << ", R=" << params.R << ")";
    throw RangeError(msg.str());
  }
  DerivedScales s;
  s.p = std::sqrt(params.alpha_s) * std::pow(params.h, exponents::relaxed(params.beta));
  s.r_h = std::cbrt(16.0 * s.p * params.r0 * params.R * params.R);
  s.factor = std::pow(params.h, exponents::wavelength(params.beta));
  s.k0_coeff = std::pow(params.alpha_s, 0.25) / s.factor;
  return s;
}

bool satisfies_standing_assumptions(const ModelParams& params) {
  if (!in_domain(params)) return false;
  if (params.beta == 2.0 && !(params.alpha_s < stiffness_bound(params))) return false;
  return derive_scales(params).r_h <= params.r0 / 3.0;
}

DerivedScales validate_and_derive(const ModelParams& params) {
  DerivedScales s = derive_scales(params);
  if (params.beta == 2.0 && !(params.alpha_s < stiffness_bound(params))) {
    std::ostringstream msg;
    msg << "alpha_s=" << params.alpha_s << " violates the beta=2 stiffness bound "
        << stiffness_bound(params);
    throw AssumptionError(msg.str());
  }
  if (s.r_h > params.r0 / 3.0) {
    std::ostringstream msg;
    msg << "wrinkling radius r_h=" << s.r_h << " exceeds r0/3";
    throw AssumptionError(msg.str());
  }
  return s;
}

GridScheme parse_scheme(const std::string& name) {
  if (name == "composite-gauss" || name == "composite_gauss") return GridScheme::composite_gauss;
  if (name == "graded") return GridScheme::graded;
  throw RangeError("unknown grid scheme: " + name);
}

std::string to_string(GridScheme scheme) {
  return scheme == GridScheme::graded ? "graded" : "composite-gauss";
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw RangeError("gauss_legendre: n must be positive");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

RadialGrid RadialGrid::from_breakpoints(std::vector<double> breakpoints, int points_per_element) {
  if (breakpoints.size() < 2 || points_per_element < 2)
    throw RangeError("grid needs at least one element and two points per element");
  if (breakpoints.front() != 0.0) throw RangeError("grid must start at r = 0");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]) || !std::isfinite(breakpoints[i]))
      throw RangeError("grid breakpoints must be strictly increasing");

  RadialGrid g;
  g.ppe_ = points_per_element;
  g.breakpoints_ = std::move(breakpoints);
  std::vector<double> x, w;
  gauss_legendre(points_per_element, x, w);
  g.ref_nodes_ = x;

  const int m = points_per_element;
  g.ref_bary_.assign(m, 1.0);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      if (k != j) g.ref_bary_[j] /= (x[j] - x[k]);
  g.ref_diff_.assign(static_cast<std::size_t>(m * m), 0.0);
  for (int i = 0; i < m; ++i) {
    double diag = 0.0;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      double d = g.ref_bary_[j] / g.ref_bary_[i] / (x[i] - x[j]);
      g.ref_diff_[static_cast<std::size_t>(i * m + j)] = d;
      diag -= d;
    }
    g.ref_diff_[static_cast<std::size_t>(i * m + i)] = diag;
  }
  g.ref_diff2_.assign(static_cast<std::size_t>(m * m), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        g.ref_diff2_[static_cast<std::size_t>(i * m + j)] +=
            g.ref_diff_[static_cast<std::size_t>(i * m + k)] *
            g.ref_diff_[static_cast<std::size_t>(k * m + j)];

  const std::size_t ne = g.breakpoints_.size() - 1;
  g.nodes_.reserve(ne * m);
  for (std::size_t e = 0; e < ne; ++e) {
    double a = g.breakpoints_[e], b = g.breakpoints_[e + 1];
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int j = 0; j < m; ++j) {
      double r = mid + half * x[j];
      g.nodes_.push_back(r);
      g.plain_weights_.push_back(half * w[j]);
      g.weights_.push_back(half * w[j] * r);
    }
  }
  return g;
}

double RadialGrid::finest_element() const {
  double m = breakpoints_.back();
  for (std::size_t e = 0; e < element_count(); ++e) m = std::min(m, element_width(e));
  return m;
}

double RadialGrid::coarsest_element() const {
  double m = 0.0;
  for (std::size_t e = 0; e < element_count(); ++e) m = std::max(m, element_width(e));
  return m;
}

std::size_t RadialGrid::locate(double r) const {
  auto it = std::upper_bound(breakpoints_.begin() + 1, breakpoints_.end() - 1, r);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

void RadialGrid::basis(std::size_t e, double r, std::span<double> value, std::span<double> d1,
                       std::span<double> d2) const {
  const int m = ppe_;
  const double a = breakpoints_[e], b = breakpoints_[e + 1];
  const double x = (2.0 * r - a - b) / (b - a);
  int hit = -1;
  for (int j = 0; j < m; ++j)
    if (x == ref_nodes_[j]) hit = j;
  if (hit >= 0) {
    for (int j = 0; j < m; ++j) value[j] = (j == hit) ? 1.0 : 0.0;
  } else {
    double denom = 0.0;
    for (int j = 0; j < m; ++j) {
      value[j] = ref_bary_[j] / (x - ref_nodes_[j]);
      denom += value[j];
    }
    for (int j = 0; j < m; ++j) value[j] /= denom;
  }
  // Derivative weights: interpolate D f, then D (D f).
  const double scale = 2.0 / (b - a);
  std::vector<double> tmp(m, 0.0);
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += value[i] * ref_diff_[static_cast<std::size_t>(i * m + j)];
    tmp[j] = s * scale;
  }
  if (!d1.empty())
    for (int j = 0; j < m; ++j) d1[j] = tmp[j];
  if (!d2.empty()) {
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += tmp[i] * ref_diff_[static_cast<std::size_t>(i * m + j)];
      d2[j] = s * scale;
    }
  }
}

double RadialGrid::integrate(std::span<const double> samples) const {
  if (samples.size() != size()) throw GridError("integrate: sample count does not match grid");
  CompensatedSum acc;
  for (std::size_t i = 0; i < size(); ++i) acc.add(samples[i] * weights_[i]);
  return acc.value();
}

double RadialGrid::integrate_plain(std::span<const double> samples) const {
  if (samples.size() != size()) throw GridError("integrate: sample count does not match grid");
  CompensatedSum acc;
  for (std::size_t i = 0; i < size(); ++i) acc.add(samples[i] * plain_weights_[i]);
  return acc.value();
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  return ppe_ == other.ppe_ && breakpoints_ == other.breakpoints_;
}

namespace {

std::vector<double> march(double r0, double base, std::span<const GradingFocus> foci,
                          double growth, std::size_t cap) {
  std::vector<double> bp{0.0};
  double b = 0.0;
  auto width_over = [&](double lo, double hi) {
    double w = base;
    for (const auto& f : foci) {
      double d = std::abs(std::clamp(f.center, lo, hi) - f.center);
      w = std::min(w, f.finest + (growth - 1.0) * d);
    }
    return w;
  };
  while (b < r0) {
    // Largest w with w <= width_over(b, b + w); the right side is nonincreasing in w.
    double w = width_over(b, b);
    if (width_over(b, b + w) < w) {
      double lo = 0.0, hi = w;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid <= width_over(b, b + mid) ? lo : hi) = mid;
      }
      w = lo;
    }
    double end = b + w;
    if (end >= r0 || r0 - end < 0.3 * w) end = r0;
    bp.push_back(end);
    b = end;
    if (bp.size() > cap) break;
  }
  return bp;
}

}  // namespace

RadialGrid build_grid(int n, double r0, GridScheme scheme, std::span<const GradingFocus> foci,
                      double growth) {
  if (n < 16) throw RangeError("build_grid: need n >= 16 nodes");
  if (!finite_positive(r0)) throw RangeError("build_grid: r0 must be positive");
  const int ppe = RadialGrid::kDefaultPointsPerElement;
  const std::size_t elements = static_cast<std::size_t>((n + ppe - 1) / ppe);

  if (scheme == GridScheme::composite_gauss || foci.empty()) {
    std::vector<double> bp(elements + 1);
    for (std::size_t e = 0; e <= elements; ++e) bp[e] = r0 * static_cast<double>(e) / elements;
    bp.back() = r0;
    return RadialGrid::from_breakpoints(std::move(bp), ppe);
  }
  if (!(growth > 1.0)) throw RangeError("build_grid: growth must exceed 1");
  for (const auto& f : foci)
    if (!finite_positive(f.finest)) throw RangeError("build_grid: focus width must be positive");

  auto fits = [&](double base) {
    auto bp = march(r0, base, foci, growth, elements);
    return bp.back() >= r0 && bp.size() - 1 <= elements;
  };
  if (!fits(r0)) throw GridError("build_grid: n too small for the requested grading");
  // Largest elements are capped by `base`; pick the smallest base that fits.
  double lo = 0.0, hi = r0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (!fits(mid))
      lo = mid;
    else
      hi = mid;
  }
  return RadialGrid::from_breakpoints(march(r0, hi, foci, growth, elements + 1), ppe);
}

RadialGrid build_grid(int n, double r0, GridScheme scheme, const DerivedScales& scales,
                      double finest) {
  GradingFocus f{scales.r_h, finest};
  return build_grid(n, r0, scheme, std::span<const GradingFocus>(&f, 1));
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "h")
    config.params.h = parse_double(key, value);
  else if (key == "beta")
    config.params.beta = parse_double(key, value);
  else if (key == "alpha_s")
    config.params.alpha_s = parse_double(key, value);
  else if (key == "r0")
    config.params.r0 = parse_double(key, value);
  else if (key == "R")
    config.params.R = parse_double(key, value);
  else if (key == "n_radial") {
    long long n = parse_integer(key, value);
    if (n < 16 || n > 100000000) throw RangeError("config: n_radial out of range");
    config.n_radial = static_cast<int>(n);
  } else if (key == "kmax") {
    long long k = parse_integer(key, value);
    if (k < 0) throw RangeError("config: kmax must be nonnegative");
    config.kmax = k;
  } else if (key == "scheme")
    config.scheme = parse_scheme(value);
  else
    throw RangeError("config: unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw RangeError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_config_entry(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw RangeError("cannot open config file: " + path);
  return parse_config(in, std::move(base));
}

std::string to_config_text(const RunConfig& config) {
  std::ostringstream out;
  out.precision(17);
  out << "h = " << config.params.h << "\n"
      << "beta = " << config.params.beta << "\n"
      << "alpha_s = " << config.params.alpha_s << "\n"
      << "r0 = " << config.params.r0 << "\n"
      << "R = " << config.params.R << "\n"
      << "n_radial = " << config.n_radial << "\n"
      << "kmax = " << config.kmax << "\n"
      << "scheme = " << to_string(config.scheme) << "\n";
  return out.str();
}

}  // namespace fvklab
