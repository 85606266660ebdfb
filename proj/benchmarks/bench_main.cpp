#include <benchmark/benchmark.h>

#include "fbmre/effects.hpp"
#include "fbmre/fbm_sim.hpp"
#include "fbmre/gram.hpp"
#include "fbmre/hurst.hpp"
#include "fbmre/panel_model.hpp"

using namespace fbmre;

namespace {

void BM_BuildGram(benchmark::State& state) {
    const auto grid = SamplingGrid::uniform(static_cast<std::size_t>(state.range(0)), 5.0);
    for (auto _ : state) benchmark::DoNotOptimize(GramMatrix(grid, Hurst(0.7)).log_det());
}
BENCHMARK(BM_BuildGram)->RangeMultiplier(4)->Range(4, 1024);

void BM_QuadFormUY(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const GramMatrix gram(SamplingGrid::uniform(n, 5.0), Hurst(0.7));
    RngStream rng(1, 0);
    const auto y = sample_fbm_exact(gram, rng).values;
    for (auto _ : state) benchmark::DoNotOptimize(gram.quad_form_uy(y));
}
BENCHMARK(BM_QuadFormUY)->RangeMultiplier(4)->Range(4, 1024);

void BM_SampleExact(benchmark::State& state) {
    const GramMatrix gram(SamplingGrid::uniform(static_cast<std::size_t>(state.range(0)), 5.0), Hurst(0.3));
    RngStream rng(2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_fbm_exact(gram, rng).values.back());
}
BENCHMARK(BM_SampleExact)->RangeMultiplier(4)->Range(16, 1024);

void BM_SampleCirculant(benchmark::State& state) {
    const CirculantFbmSampler sampler(static_cast<std::size_t>(state.range(0)), 5.0, Hurst(0.3));
    RngStream rng(3, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(rng).values.back());
}
BENCHMARK(BM_SampleCirculant)->RangeMultiplier(4)->Range(16, 1 << 16);

void BM_EstimateH(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RngStream rng(4, 0);
    const auto y = sample_fbm_fast(n, 1.0, Hurst(0.6), rng).values;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_h(y, 1.0, 2.0, diff2_filter()).h_hat);
}
BENCHMARK(BM_EstimateH)->RangeMultiplier(4)->Range(64, 1 << 14);

void BM_EstimateEffects(benchmark::State& state) {
    const auto grid = SamplingGrid::uniform(static_cast<std::size_t>(state.range(0)), 5.0);
    RngStream rng(5, 0);
    const auto panel = simulate_panel(500, grid, Hurst(0.5), EffectsLaw(-2.0, 1.0), rng);
    const GramMatrix gram(grid, Hurst(0.5));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_effects(panel, gram).mu_hat);
}
BENCHMARK(BM_EstimateEffects)->Arg(4)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
