#include <benchmark/benchmark.h>

#include "sitecalc/catalog.hpp"
#include "sitecalc/locale.hpp"
#include "sitecalc/sheaf.hpp"

using namespace sitecalc;

static void BM_DownSetFrameAntichain(benchmark::State& state) {
    const FinitePoset P = antichain(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(DownSetFrame(P).size());
}
BENCHMARK(BM_DownSetFrameAntichain)->DenseRange(4, 16, 4);

static void BM_DownSetFrameChain(benchmark::State& state) {
    const FinitePoset P = chain(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(DownSetFrame(P).size());
}
BENCHMARK(BM_DownSetFrameChain)->RangeMultiplier(2)->Range(8, 64);

static void BM_HeytingImplication(benchmark::State& state) {
    const FinitePoset P = chain(static_cast<int>(state.range(0)));
    Mask X = 0x5555555555555555ull & P.all();
    Mask Y = 0x0f0f0f0f0f0f0f0full & P.all();
    for (auto _ : state) benchmark::DoNotOptimize(heyting_implication(P, X, Y));
}
BENCHMARK(BM_HeytingImplication)->Arg(8)->Arg(32)->Arg(64);

static void BM_EnumerateTopologies(benchmark::State& state) {
    const auto& entry = catalog()[static_cast<std::size_t>(state.range(0))];
    FramePtr F = make_frame(entry.poset);
    state.SetLabel(entry.name);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_all_topologies(F).size());
}
BENCHMARK(BM_EnumerateTopologies)->DenseRange(0, 8);

static void BM_CommutingDiagram(benchmark::State& state) {
    FramePtr F = make_frame(catalog_poset("diamond"));
    auto all = enumerate_all_topologies(F);
    for (auto _ : state) benchmark::DoNotOptimize(verify_commuting_diagram(all).ok());
}
BENCHMARK(BM_CommutingDiagram);

static void BM_Join(benchmark::State& state) {
    FramePtr F = make_frame(antichain(static_cast<int>(state.range(0))));
    Topology J = subset_topology(F, 0b0011), K = subset_topology(F, 0b0110);
    for (auto _ : state) benchmark::DoNotOptimize(join(J, K));
}
BENCHMARK(BM_Join)->Arg(4)->Arg(6);

static void BM_SheafCheck(benchmark::State& state) {
    const FinitePoset& P = catalog_poset("Λ");
    FramePtr F = make_frame(P);
    Topology J = subset_topology(F, 0b110);
    auto sample = enumerate_presheaves(P, 2);
    for (auto _ : state) {
        long sheaves = 0;
        for (const auto& G : sample) sheaves += is_sheaf(G, J).ok;
        benchmark::DoNotOptimize(sheaves);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(sample.size()));
}
BENCHMARK(BM_SheafCheck);

static void BM_ComparisonCheck(benchmark::State& state) {
    const FinitePoset P = chain(3);
    FramePtr F = make_frame(P);
    Mask X = 0b101;
    Topology J = subset_topology(F, X);
    auto onX = enumerate_presheaves(induced(P, X).poset, 2);
    auto onP = enumerate_presheaves(P, 2);
    for (auto _ : state) benchmark::DoNotOptimize(comparison_check(J, X, onX, onP, state.range(0) != 0).ok());
}
BENCHMARK(BM_ComparisonCheck)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
