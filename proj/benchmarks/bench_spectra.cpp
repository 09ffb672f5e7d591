#include <benchmark/benchmark.h>

#include "alloylab/hamiltonian.hpp"
#include "alloylab/model.hpp"
#include "alloylab/spectra.hpp"

using namespace alloylab;

namespace {

AlloyModel gap_model(int dim, int n) {
    DisorderSpec spec;
    spec.profile = {ProfileShape::indicator_cube, 0.2, 0.4, 1.0};
    spec.placement = PlacementMode::crooked;
    spec.structure_seed = 1;
    return make_model(build_grid(dim, 8.0, n), {}, spec);
}

void BM_Assemble2D(benchmark::State& state) {
    const auto g = build_grid(2, 8.0, static_cast<int>(state.range(0)));
    auto bg = zero_background(g);
    for (auto& axis : bg.link_potential) {
        for (std::size_t i = 0; i < axis.size(); ++i) axis[i] = 0.01 * static_cast<double>(i % 17);
    }
    for (auto _ : state) benchmark::DoNotOptimize(assemble_hamiltonian(g, bg));
    state.SetComplexityN(static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_Assemble2D)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_SampleOperator(benchmark::State& state) {
    const auto model = gap_model(2, static_cast<int>(state.range(0)));
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(model.sample_operator(1.0, 7, i++));
}
BENCHMARK(BM_SampleOperator)->Arg(32)->Arg(64);

// Counting through two inertia computations against a full dense solve.
void BM_CountByInertia(benchmark::State& state) {
    const auto model = gap_model(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto op = model.sample_operator(1.0, 3, 0);
    for (auto _ : state) benchmark::DoNotOptimize(count_in_interval(op, {5.0, 10.0}));
}
BENCHMARK(BM_CountByInertia)->Args({1, 255})->Args({1, 4095})->Args({2, 24})->Args({2, 48});

void BM_CountByDenseSpectrum(benchmark::State& state) {
    const auto model = gap_model(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto op = model.sample_operator(1.0, 3, 0);
    for (auto _ : state) {
        const auto r = eigen_spectrum(op, std::nullopt, {}, {5.0, 10.0});
        benchmark::DoNotOptimize(r.count_in_window);
    }
}
BENCHMARK(BM_CountByDenseSpectrum)->Args({1, 255})->Args({2, 24})->Args({2, 48});

void BM_LowestEigenpairsLanczos(benchmark::State& state) {
    const auto model = gap_model(2, static_cast<int>(state.range(0)));
    const auto op = model.sample_operator(1.0, 3, 0);
    SolverOptions opt;
    opt.dense_crossover = 0;
    for (auto _ : state) benchmark::DoNotOptimize(eigen_spectrum(op, 10, opt));
}
BENCHMARK(BM_LowestEigenpairsLanczos)->Arg(48)->Arg(96);

}  // namespace

BENCHMARK_MAIN();
