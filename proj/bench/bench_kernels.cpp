#include <benchmark/benchmark.h>

#include <vector>

#include "zonovol/kernels.hpp"
#include "zonovol/oracle.hpp"
#include "zonovol/random.hpp"
#include "zonovol/zonoid.hpp"

using namespace zonovol;

namespace {

Mat random_generators(int n, int m, std::uint64_t seed) {
    Rng rng(seed);
    Mat g(n, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < n; ++r) g(r, c) = 2.0 * rng.uniform() - 1.0;
    return g;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

// V(Z_1, ..., Z_n) with m generators per body: m^n determinant tuples.
void BM_DetTupleSum(benchmark::State& state) {
    const int n = 5, m = static_cast<int>(state.range(1));
    std::vector<GeneratorBlock> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back({random_generators(n, m, 10 + i), 1});
    const Exec exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(det_tuple_sum(blocks, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(subset_tuple_count(blocks)));
    label(state);
}

// D_j over all j-subsets of m generators, the input of the projection generating measure.
void BM_SubsetVolumes(benchmark::State& state) {
    const int n = 6, j = 3, m = static_cast<int>(state.range(1));
    const Mat g = random_generators(n, m, 3);
    const Exec exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(subset_volumes(g, j, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(binomial_count(m, j)));
    label(state);
}

// Atom tuples of mixed_volume_zonotopes_ball: a mixed-radix sum with a small determinant per term.
void BM_MixedRadixSum(benchmark::State& state) {
    const std::uint64_t r = static_cast<std::uint64_t>(state.range(1));
    const std::vector<std::uint64_t> radices{r, r, r, r};
    const Mat g = random_generators(4, static_cast<int>(r), 5);
    const Exec exec = exec_of(state);
    auto term = [&](std::span<const std::uint64_t> d) {
        Mat m(4, 4);
        for (int i = 0; i < 4; ++i) m.col(i) = g.col(static_cast<Eigen::Index>(d[i]));
        return std::abs(m.determinant());
    };
    for (auto _ : state) benchmark::DoNotOptimize(mixed_radix_sum(radices, term, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(r * r * r * r));
    label(state);
}

// End to end: a zonotope mixed volume in R^4 and a Kubota estimate, both through the public API.
void BM_ZonotopeMixedVolume(benchmark::State& state) {
    std::vector<ZonotopeTerm> terms;
    for (int i = 0; i < 4; ++i) terms.push_back({Zonotope(random_generators(4, 12, 20 + i), Vec::Zero(4)), 1});
    EvalOptions opts;
    opts.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(zonotope_mixed_volume(terms, opts));
    label(state);
}

void BM_KubotaMonteCarlo(benchmark::State& state) {
    std::vector<Vec> pts;
    const Mat g = random_generators(3, 30, 9);
    for (int c = 0; c < g.cols(); ++c) pts.push_back(g.col(c));
    const VPolytope K(pts);
    const Exec exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(kubota_intrinsic_volume_mc(K, 2, 4000, 1, exec));
    label(state);
}

}  // namespace

BENCHMARK(BM_DetTupleSum)->ArgsProduct({{0, 1}, {6, 10}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SubsetVolumes)->ArgsProduct({{0, 1}, {24, 40}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MixedRadixSum)->ArgsProduct({{0, 1}, {12, 24}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ZonotopeMixedVolume)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KubotaMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
