#include <benchmark/benchmark.h>

#include "nfactor/estimators.hpp"
#include "nfactor/simulate.hpp"

using namespace nfactor;

namespace {

DataMatrix bench_data(Index p, Index n) {
    std::mt19937_64 rng(12345);
    Loadings l = make_loadings({LoadingCase::C2, p, 3}, rng);
    return sample_factor_model(l.B, l.Psi, Population::normal, n, rng);
}

void BM_spearman(benchmark::State& state) {
    const Index p = state.range(0);
    const DataMatrix y = bench_data(p, 2 * p);
    for (auto _ : state) benchmark::DoNotOptimize(spearman(y));
    state.SetComplexityN(p);
}
BENCHMARK(BM_spearman)->Arg(100)->Arg(200)->Arg(400)->Complexity();

void BM_eigen_sym(benchmark::State& state) {
    const Index p = state.range(0);
    const CorrMatrix rho = spearman(bench_data(p, 2 * p));
    for (auto _ : state) benchmark::DoNotOptimize(eigen_sym(rho));
}
BENCHMARK(BM_eigen_sym)->Arg(100)->Arg(200)->Arg(400);

void BM_mkendall(benchmark::State& state) {
    const Index p = state.range(0);
    const DataMatrix y = bench_data(p, 2 * p);
    for (auto _ : state) benchmark::DoNotOptimize(mkendall(y));
}
BENCHMARK(BM_mkendall)->Arg(50)->Arg(100)->Arg(200);

void BM_estimate_sr(benchmark::State& state) {
    const Index p = state.range(0);
    const DataMatrix y = bench_data(p, 2 * p);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_sr(y));
}
BENCHMARK(BM_estimate_sr)->Arg(100)->Arg(200);

void BM_rank_transform(benchmark::State& state) {
    const Index p = state.range(0);
    const DataMatrix y = bench_data(p, 2 * p);
    for (auto _ : state) benchmark::DoNotOptimize(rank_transform(y));
}
BENCHMARK(BM_rank_transform)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
