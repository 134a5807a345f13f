#include <benchmark/benchmark.h>

#include "storval/contract.hpp"
#include "storval/crossing.hpp"
#include "storval/settlement.hpp"

using namespace storval;

namespace {

const MarketPrices kPrices{0.0, 1.0, 1.0};

}  // namespace

static void BM_SamplePaths(benchmark::State& state) {
    const auto spec = WindProcessSpec::iid(24, Marginal::beta(2.0, 5.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(PathSet::sample(spec, static_cast<std::size_t>(state.range(0)), 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePaths)->Arg(1000)->Arg(10000);

static void BM_ExpectedProfit(benchmark::State& state) {
    const auto spec = WindProcessSpec::iid(24, Marginal::uniform());
    const PathSet set = PathSet::sample(spec, static_cast<std::size_t>(state.range(0)), 2);
    const StorageType theta = StorageType::ideal(0.2, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(expected_profit(0.5, theta, set, kPrices));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExpectedProfit)->Arg(1000)->Arg(10000);

static void BM_OptimizeContract(benchmark::State& state) {
    const auto spec = WindProcessSpec::iid(24, Marginal::uniform());
    const PathSet set = PathSet::sample(spec, 2000, 3);
    const StorageType theta = StorageType::ideal(0.2, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(optimize_contract(theta, set, kPrices));
}
BENCHMARK(BM_OptimizeContract)->Unit(benchmark::kMillisecond);

static void BM_MarginalValueMonteCarlo(benchmark::State& state) {
    const auto spec = WindProcessSpec::iid(24, Marginal::uniform());
    MarginalValueOptions opt;
    opt.paths = 10000;
    opt.monte_carlo = true;
    for (auto _ : state) benchmark::DoNotOptimize(marginal_value(spec, kPrices, opt));
}
BENCHMARK(BM_MarginalValueMonteCarlo)->Unit(benchmark::kMillisecond);

static void BM_EmpiricalEstimator(benchmark::State& state) {
    const auto spec = WindProcessSpec::iid(24, Marginal::uniform());
    const PathSet set = PathSet::sample(spec, 10000, 4);
    const TraceMatrix traces(set.size(), set.horizon(),
                             std::vector<double>(set.data().begin(), set.data().end()));
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_marginal_value_from_data(traces, kPrices, 200, 5));
}
BENCHMARK(BM_EmpiricalEstimator)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
