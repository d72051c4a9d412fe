#include <benchmark/benchmark.h>

#include "shf/acoustic1d.hpp"
#include "shf/extraction.hpp"
#include "shf/ladder.hpp"
#include "shf/materials.hpp"

namespace {

const shf::MbvdParams kDevice = shf::from_targets({5.31e9, 0.239, 101.0, 1250e-15, 7.7, 1.5});

void BM_SynthesizeTrace(benchmark::State& state) {
    const auto grid = shf::linear_grid(3e9, 7e9, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(shf::synthesize_trace(kDevice, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthesizeTrace)->Arg(2001)->Arg(20001);

void BM_FitMbvd(benchmark::State& state) {
    const auto trace = shf::synthesize_trace(kDevice, shf::linear_grid(3e9, 7e9, static_cast<std::size_t>(state.range(0))));
    const auto guess = shf::initial_guess(trace);
    for (auto _ : state) benchmark::DoNotOptimize(shf::fit_mbvd(trace, guess));
}
BENCHMARK(BM_FitMbvd)->Arg(401)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_LadderResponse(benchmark::State& state) {
    const auto spec = shf::design_ladder({});
    const auto grid = shf::filter_grid(5.31e9, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(shf::ladder_response(spec, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LadderResponse)->Arg(4001);

void BM_Kt2Sweep(benchmark::State& state) {
    shf::SweepSettings s;
    s.kt2_lo = 0.05;
    s.kt2_hi = 0.35;
    s.n_steps = 7;
    for (auto _ : state) benchmark::DoNotOptimize(shf::kt2_sweep(s));
}
BENCHMARK(BM_Kt2Sweep)->Unit(benchmark::kMillisecond);

void BM_FindStopBands(benchmark::State& state) {
    const auto cell = shf::acoustic::geometry_to_segments(shf::acoustic::reference_2drr_geometry());
    for (auto _ : state)
        benchmark::DoNotOptimize(shf::acoustic::find_stop_bands(cell, 4.5e9, 6e9, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FindStopBands)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_TeResonance(benchmark::State& state) {
    const auto stack = shf::acoustic::reference_rod_stack();
    for (auto _ : state) benchmark::DoNotOptimize(shf::acoustic::te_resonance(stack));
}
BENCHMARK(BM_TeResonance);

}  // namespace
BENCHMARK_MAIN();
