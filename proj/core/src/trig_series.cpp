#include "fvklab/trig_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fvklab/errors.hpp"

namespace fvklab {

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}

TrigSeries TrigSeries::dense(double mean, std::vector<double> cos, std::vector<double> sin,
                             std::int64_t stride) {
  if (cos.size() != sin.size()) throw RangeError("TrigSeries: cos/sin length mismatch");
  if (stride < 1) throw RangeError("TrigSeries: stride must be positive");
  TrigSeries t(mean, stride);
  if (!cos.empty()) t.blocks_.push_back(ModeBlock{1, std::move(cos), std::move(sin)});
  return t;
}

void TrigSeries::check_stride(const TrigSeries& o) const {
  if (!blocks_.empty() && !o.blocks_.empty() && stride_ != o.stride_)
    throw RangeError("TrigSeries: incompatible mode strides");
}

void TrigSeries::add_band(std::int64_t first, const double* c, const double* s, std::size_t n,
                          double a) {
  if (n == 0) return;
  if (first < 1) throw RangeError("TrigSeries: mode index must be >= 1");
  const std::int64_t last = first + static_cast<std::int64_t>(n) - 1;
  // Blocks touching [first - 1, last + 1] get merged with the band.
  auto lo = std::lower_bound(blocks_.begin(), blocks_.end(), first - 1,
                             [](const ModeBlock& b, std::int64_t v) { return b.last() < v; });
  auto hi = lo;
  while (hi != blocks_.end() && hi->first <= last + 1) ++hi;

  if (hi - lo == 1 && lo->first <= first && lo->last() >= last) {
    std::size_t off = static_cast<std::size_t>(first - lo->first);
    for (std::size_t i = 0; i < n; ++i) {
      lo->cos[off + i] += a * c[i];
      lo->sin[off + i] += a * s[i];
    }
    return;
  }
  ModeBlock merged;
  merged.first = lo != hi ? std::min(first, lo->first) : first;
  std::int64_t mlast = lo != hi ? std::max(last, (hi - 1)->last()) : last;
  std::size_t len = static_cast<std::size_t>(mlast - merged.first + 1);
  merged.cos.assign(len, 0.0);
  merged.sin.assign(len, 0.0);
  for (auto it = lo; it != hi; ++it) {
    std::size_t off = static_cast<std::size_t>(it->first - merged.first);
    std::copy(it->cos.begin(), it->cos.end(), merged.cos.begin() + static_cast<std::ptrdiff_t>(off));
    std::copy(it->sin.begin(), it->sin.end(), merged.sin.begin() + static_cast<std::ptrdiff_t>(off));
  }
  std::size_t off = static_cast<std::size_t>(first - merged.first);
  for (std::size_t i = 0; i < n; ++i) {
    merged.cos[off + i] += a * c[i];
    merged.sin[off + i] += a * s[i];
  }
  auto pos = blocks_.erase(lo, hi);
  blocks_.insert(pos, std::move(merged));
}

void TrigSeries::add_mode(std::int64_t index, double c, double s) { add_band(index, &c, &s, 1); }

double TrigSeries::cos_at(std::int64_t index) const {
  for (const auto& b : blocks_)
    if (index >= b.first && index <= b.last()) return b.cos[static_cast<std::size_t>(index - b.first)];
  return 0.0;
}

double TrigSeries::sin_at(std::int64_t index) const {
  for (const auto& b : blocks_)
    if (index >= b.first && index <= b.last()) return b.sin[static_cast<std::size_t>(index - b.first)];
  return 0.0;
}

double TrigSeries::fluct_square() const {
  double acc = 0.0;
  for (const auto& b : blocks_)
    for (std::size_t i = 0; i < b.size(); ++i) acc += b.cos[i] * b.cos[i] + b.sin[i] * b.sin[i];
  return acc;
}

double TrigSeries::weighted_square(int power) const {
  double acc = 0.0;
  for (const auto& b : blocks_)
    for (std::size_t i = 0; i < b.size(); ++i) {
      double k = static_cast<double>((b.first + static_cast<std::int64_t>(i)) * stride_);
      acc += std::pow(k, power) * (b.cos[i] * b.cos[i] + b.sin[i] * b.sin[i]);
    }
  return acc;
}

double TrigSeries::eval(double theta) const {
  double acc = mean_;
  for (const auto& b : blocks_)
    for (std::size_t i = 0; i < b.size(); ++i) {
      double k = static_cast<double>((b.first + static_cast<std::int64_t>(i)) * stride_);
      acc += std::numbers::sqrt2 * (b.cos[i] * std::cos(k * theta) + b.sin[i] * std::sin(k * theta));
    }
  return acc;
}

TrigSeries TrigSeries::d_theta() const {
  TrigSeries out(0.0, stride_);
  out.blocks_ = blocks_;
  for (auto& b : out.blocks_)
    for (std::size_t i = 0; i < b.size(); ++i) {
      double k = static_cast<double>((b.first + static_cast<std::int64_t>(i)) * stride_);
      double c = b.cos[i];
      b.cos[i] = k * b.sin[i];
      b.sin[i] = -k * c;
    }
  return out;
}

TrigSeries& TrigSeries::operator*=(double a) {
  mean_ *= a;
  for (auto& b : blocks_)
    for (std::size_t i = 0; i < b.size(); ++i) {
      b.cos[i] *= a;
      b.sin[i] *= a;
    }
  return *this;
}

TrigSeries& TrigSeries::operator+=(const TrigSeries& o) {
  check_stride(o);
  if (blocks_.empty()) stride_ = o.stride_;
  mean_ += o.mean_;
  for (const auto& b : o.blocks_) add_band(b.first, b.cos.data(), b.sin.data(), b.size());
  return *this;
}

TrigSeries& TrigSeries::operator-=(const TrigSeries& o) {
  check_stride(o);
  if (blocks_.empty()) stride_ = o.stride_;
  mean_ -= o.mean_;
  for (const auto& b : o.blocks_) add_band(b.first, b.cos.data(), b.sin.data(), b.size(), -1.0);
  return *this;
}

TrigSeries product(const TrigSeries& f, const TrigSeries& g) {
  if (!f.blocks().empty() && !g.blocks().empty() && f.stride() != g.stride())
    throw RangeError("TrigSeries: incompatible mode strides");
  const std::int64_t stride = f.blocks().empty() ? g.stride() : f.stride();
  TrigSeries out(f.mean() * g.mean(), stride);
  double mean = f.mean() * g.mean();
  for (const auto& b : g.blocks()) out.add_band(b.first, b.cos.data(), b.sin.data(), b.size(), f.mean());
  for (const auto& b : f.blocks()) out.add_band(b.first, b.cos.data(), b.sin.data(), b.size(), g.mean());

  std::vector<double> sc, ss, dc, ds;
  for (const auto& a : f.blocks()) {
    for (const auto& b : g.blocks()) {
      const std::size_t na = a.size(), nb = b.size();
      const std::size_t len = na + nb - 1;
      sc.assign(len, 0.0);
      ss.assign(len, 0.0);
      dc.assign(len, 0.0);
      ds.assign(len, 0.0);
      // Difference index a_i - b_j stored at offset i - j + nb - 1.
      for (std::size_t i = 0; i < na; ++i) {
        const double fc = a.cos[i], fs = a.sin[i];
        double* psc = sc.data() + i;
        double* pss = ss.data() + i;
        double* pdc = dc.data() + i + nb - 1;
        double* pds = ds.data() + i + nb - 1;
        for (std::size_t j = 0; j < nb; ++j) {
          const double gc = b.cos[j], gs = b.sin[j];
          psc[j] += fc * gc - fs * gs;
          pss[j] += fc * gs + fs * gc;
          *(pdc - j) += fc * gc + fs * gs;
          *(pds - j) += fs * gc - fc * gs;
        }
      }
      out.add_band(a.first + b.first, sc.data(), ss.data(), len, kInvSqrt2);

      const std::int64_t dlo = a.first - b.last();
      std::vector<double> pc, ps;
      std::int64_t pfirst = 0;
      std::int64_t plast = -1;
      for (std::size_t t = 0; t < len; ++t) {
        std::int64_t d = dlo + static_cast<std::int64_t>(t);
        if (d == 0) continue;
        std::int64_t k = d > 0 ? d : -d;
        if (plast < pfirst) {
          pfirst = plast = k;
        } else {
          pfirst = std::min(pfirst, k);
          plast = std::max(plast, k);
        }
      }
      if (plast >= pfirst) {
        pc.assign(static_cast<std::size_t>(plast - pfirst + 1), 0.0);
        ps.assign(pc.size(), 0.0);
      }
      for (std::size_t t = 0; t < len; ++t) {
        std::int64_t d = dlo + static_cast<std::int64_t>(t);
        if (d == 0) {
          mean += dc[t];
        } else if (d > 0) {
          pc[static_cast<std::size_t>(d - pfirst)] += dc[t];
          ps[static_cast<std::size_t>(d - pfirst)] += ds[t];
        } else {
          pc[static_cast<std::size_t>(-d - pfirst)] += dc[t];
          ps[static_cast<std::size_t>(-d - pfirst)] -= ds[t];
        }
      }
      if (!pc.empty()) out.add_band(pfirst, pc.data(), ps.data(), pc.size(), kInvSqrt2);
    }
  }
  out.set_mean(mean);
  return out;
}

double mean_product(const TrigSeries& f, const TrigSeries& g) {
  double acc = f.mean() * g.mean();
  if (f.blocks().empty() || g.blocks().empty()) return acc;
  if (f.stride() != g.stride()) throw RangeError("TrigSeries: incompatible mode strides");
  for (const auto& a : f.blocks())
    for (const auto& b : g.blocks()) {
      std::int64_t lo = std::max(a.first, b.first), hi = std::min(a.last(), b.last());
      for (std::int64_t k = lo; k <= hi; ++k) {
        std::size_t i = static_cast<std::size_t>(k - a.first), j = static_cast<std::size_t>(k - b.first);
        acc += a.cos[i] * b.cos[j] + a.sin[i] * b.sin[j];
      }
    }
  return acc;
}

}  // namespace fvklab
