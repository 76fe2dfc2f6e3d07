#include <benchmark/benchmark.h>

#include "bernmm/analytic.hpp"
#include "bernmm/numeric.hpp"
#include "bernmm/risk.hpp"

namespace {

using namespace bernmm;

void BM_SupRisk(benchmark::State& state) {
    const ParamSpace space(0.8);
    double a = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sup_risk({a, 0.7}, space));
        a = a < 0.7 ? a + 1e-6 : 0.1;
    }
}
BENCHMARK(BM_SupRisk);

// eta in thousandths; cost grows as (eta / step)^2.
void BM_GridMinimax(benchmark::State& state) {
    const ParamSpace space(static_cast<double>(state.range(0)) / 1000.0);
    const GridSpec grid(1e-3);
    const auto threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_minimax(space, grid, threads));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid_axis(space, grid).size() *
                                                                      grid_axis(space, grid).size()));
}
BENCHMARK(BM_GridMinimax)
    ->ArgsProduct({{200, 500, 1000}, {1, 4}})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

void BM_Refine(benchmark::State& state) {
    const ParamSpace space(static_cast<double>(state.range(0)) / 1000.0);
    const NumericSolution coarse = grid_minimax(space, GridSpec(1e-2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(refine(space, coarse.estimator(), 1e-8));
    }
}
BENCHMARK(BM_Refine)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_GeneralSupRisk(benchmark::State& state) {
    const GeneralEstimator est = GeneralEstimator::classic(state.range(0));
    const ParamSpace space(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(general_sup_risk(est, space));
    }
}
BENCHMARK(BM_GeneralSupRisk)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
    const GeneralEstimator est({0.25, 0.75});
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo_risk(est, 0.3, static_cast<std::size_t>(state.range(0)), 1));
    }
}
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
