#include "orthowave/basis1d.hpp"
#include "orthowave/block_operator.hpp"
#include "orthowave/generators.hpp"
#include "orthowave/level_blocks.hpp"
#include "orthowave/market.hpp"
#include "orthowave/payoff_projection.hpp"
#include "orthowave/sparse_grid.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace orthowave;

namespace {

const GeneratorSet& generators() {
    static const GeneratorSet g = build_generator_set(default_generator_file());
    return g;
}

struct Market {
    MarketParams m;
    DomainSpec dom;

    explicit Market(int d) {
        m.d = d;
        m.r = 0.06;
        m.sigma.assign(static_cast<std::size_t>(d), 0.2);
        m.rho.assign(static_cast<std::size_t>(d * d), 0.25);
        for (int i = 0; i < d; ++i) m.rho[static_cast<std::size_t>(i * d + i)] = 1.0;
        m.strike = 10.0;
        dom.s_min.assign(static_cast<std::size_t>(d), 0.1);
        dom.s_max.assign(static_cast<std::size_t>(d), 50.0);
    }
};

// Args: d, lemma level k.
void BM_Apply(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Market mk(d);
    const Basis1D b = build_basis(generators(), k);
    const LevelBlocks lb = assemble_level_blocks(b, k);
    const SparseIndexSet set = enumerate(d, k);
    const BlockOperator a = make_cn_system(set, lb, diffusion_table(mk.m, mk.dom), 0.06, std::pow(4.0, -k));
    std::vector<double> x(set.total_count()), y(set.total_count());
    std::mt19937 rng(1);
    std::normal_distribution<double> n;
    for (double& v : x) v = n(rng);
    for (auto _ : state) {
        a.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.counters["N"] = static_cast<double>(set.total_count());
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(set.total_count()));
}
BENCHMARK(BM_Apply)->Args({2, 3})->Args({2, 5})->Args({3, 3})->Args({4, 1})->Unit(benchmark::kMicrosecond);

void BM_LevelBlocks(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const Basis1D b = build_basis(generators(), k);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_level_blocks(b, k));
}
BENCHMARK(BM_LevelBlocks)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_ProjectPayoff(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Market mk(d);
    const Basis1D b = build_basis(generators(), k);
    const SparseIndexSet set = enumerate(d, k);
    const ExpLinearPayoff u = payoff_on_cube(OptionKind::put, mk.m, mk.dom);
    for (auto _ : state) benchmark::DoNotOptimize(project_payoff(u, set, b));
    state.counters["N"] = static_cast<double>(set.total_count());
}
BENCHMARK(BM_ProjectPayoff)->Args({2, 3})->Args({2, 4})->Args({3, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
