#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "fvklab/construction.hpp"
#include "fvklab/energy.hpp"
#include "fvklab/relaxed.hpp"
#include "fvklab/scalelab.hpp"

using namespace fvklab;

namespace {

ModelParams params(double h) {
  ModelParams p;
  p.h = h;
  p.beta = 1.0;
  p.alpha_s = 1e-4;
  return p;
}

TrigSeries random_series(std::int64_t K, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(K)), s(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = u(g) / (1.0 + static_cast<double>(k));
    s[k] = u(g) / (1.0 + static_cast<double>(k));
  }
  return TrigSeries::dense(0.0, std::move(c), std::move(s));
}

void BM_SeriesProduct(benchmark::State& st) {
  const TrigSeries f = random_series(st.range(0), 1), g = random_series(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(product(f, g));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_SeriesProduct)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_WrSpectral(benchmark::State& st) {
  const ModelParams p = params(1e-4);
  const DerivedScales s = derive_scales(p);
  const TrigSeries w = random_series(st.range(0), 3) * 1e-3;
  for (auto _ : st) benchmark::DoNotOptimize(w_r_spectral(-3 * s.p, w, 0.7, p, s));
}
BENCHMARK(BM_WrSpectral)->RangeMultiplier(4)->Range(16, 4096);

void BM_MinimizeF0(benchmark::State& st) {
  const ModelParams p = params(1e-4);
  const DerivedScales s = validate_and_derive(p);
  auto grid = relaxed_grid(static_cast<int>(st.range(0)), p, s);
  for (auto _ : st) benchmark::DoNotOptimize(minimize_F0(p, s, grid).energy);
}
BENCHMARK(BM_MinimizeF0)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_MinimizeFh(benchmark::State& st) {
  const ModelParams p = params(1e-5);
  const DerivedScales s = validate_and_derive(p);
  auto grid = relaxed_grid(static_cast<int>(st.range(0)), p, s);
  for (auto _ : st) benchmark::DoNotOptimize(minimize_Fh(p, s, grid).gap);
}
BENCHMARK(BM_MinimizeFh)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_ConstructionJet(benchmark::State& st) {
  const ModelParams p = params(std::pow(10.0, -static_cast<double>(st.range(0))));
  const DerivedScales s = validate_and_derive(p);
  const WrinkleConstruction wc(p, s, default_config(p, s));
  for (auto _ : st) benchmark::DoNotOptimize(wc.jet(0.7));
}
BENCHMARK(BM_ConstructionJet)->Arg(6)->Arg(9)->Arg(12);

void BM_ExcessEnergy(benchmark::State& st) {
  const ModelParams p = params(1e-8);
  const DerivedScales s = validate_and_derive(p);
  const ConstructionConfig c = default_config(p, s);
  auto grid = construction_grid(static_cast<int>(st.range(0)), p, s, c);
  for (auto _ : st) benchmark::DoNotOptimize(excess_energy(p, s, c, *grid).value);
}
BENCHMARK(BM_ExcessEnergy)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LemmaCertificate(benchmark::State& st) {
  const ModelParams p = params(1e-4);
  const DerivedScales s = validate_and_derive(p);
  const double de = default_lemma_margin(p);
  const RandomWrinkleField f = random_wrinkle_field(1, p, s, 2.0 / 3.0, 0.99, de);
  for (auto _ : st) benchmark::DoNotOptimize(lemma_ws2(f.w, f.ubar, 0.7, 0.8, de, p, s).lhs);
}
BENCHMARK(BM_LemmaCertificate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
