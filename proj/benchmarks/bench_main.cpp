#include "evpos/catalog.hpp"
#include "evpos/pf_verifier.hpp"
#include "evpos/positivity.hpp"
#include "evpos/report.hpp"
#include "evpos/rng.hpp"
#include "evpos/spectral.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace evpos;

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    ComplexMatrix a(n, n);
    for (auto& z : a.data()) z = {rng.normal(), rng.normal()};
    return a;
}

void BM_Eigenvalues(benchmark::State& state) {
    const auto a = random_matrix(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(a));
}
BENCHMARK(BM_Eigenvalues)->Arg(8)->Arg(32)->Arg(64)->Arg(128);

void BM_Svd(benchmark::State& state) {
    const auto a = random_matrix(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(svd(a));
}
BENCHMARK(BM_Svd)->Arg(8)->Arg(32)->Arg(64);

void BM_ConeDistance(benchmark::State& state) {
    CounterRng rng(3);
    CVector x(static_cast<std::size_t>(state.range(0)));
    for (auto& z : x) z = {rng.normal(), rng.normal()};
    const LatticeVector v(x, Norm::ell2());
    for (auto _ : state) benchmark::DoNotOptimize(cone_distance(v));
}
BENCHMARK(BM_ConeDistance)->Arg(16)->Arg(256);

void BM_UniformEventualDense(benchmark::State& state) {
    const auto inst = make_eventually_positive(static_cast<std::size_t>(state.range(0)), 0.5, 4);
    const OperatorModel t = DenseModel{inst.matrix, Norm::ell1()};
    for (auto _ : state) benchmark::DoNotOptimize(uniform_eventual(t));
}
BENCHMARK(BM_UniformEventualDense)->Arg(4)->Arg(12)->Arg(48);

void BM_UniformEventualRankTwo(benchmark::State& state) {
    const OperatorModel t = individual_not_uniform_model();
    for (auto _ : state) benchmark::DoNotOptimize(uniform_eventual(t));
}
BENCHMARK(BM_UniformEventualRankTwo)->Unit(benchmark::kMillisecond);

void BM_PositiveEigenvector(benchmark::State& state) {
    const auto inst = make_eventually_positive(static_cast<std::size_t>(state.range(0)), 0.4, 5);
    for (auto _ : state) benchmark::DoNotOptimize(positive_eigenvector(inst.matrix, Norm::ell1()));
}
BENCHMARK(BM_PositiveEigenvector)->Arg(4)->Arg(12);

void BM_ClassifyCatalog(benchmark::State& state) {
    const auto names = catalog_names();
    const auto in = input_from_example(names[static_cast<std::size_t>(state.range(0))]);
    state.SetLabel(in.operator_id);
    for (auto _ : state) benchmark::DoNotOptimize(run_classify(in));
}
BENCHMARK(BM_ClassifyCatalog)->DenseRange(0, 7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
