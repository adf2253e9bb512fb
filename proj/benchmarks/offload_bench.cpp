#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "offload/callgraph.hpp"
#include "offload/engine.hpp"
#include "offload/partition.hpp"

namespace {

using namespace offload;

// Layered fork/join graph: root fans out into `width` chains of `depth` nodes that join at a sink.
CallGraph fork_join(int width, int depth) {
    std::vector<MethodNode> nodes{{"root", false, 0.01, 0.0, 0, 0}, {"sink", false, 0.01, 0.0, 0, 0}};
    std::vector<CallEdge> edges;
    for (int w = 0; w < width; ++w) {
        std::string prev = "root";
        for (int d = 0; d < depth; ++d) {
            std::string id = "n" + std::to_string(w) + "_" + std::to_string(d);
            nodes.push_back({id, true, 0.5, 0.05, 250'000, 1'000});
            edges.push_back({prev, id});
            prev = id;
        }
        edges.push_back({prev, "sink"});
    }
    return CallGraph(std::move(nodes), std::move(edges), "root");
}

CallGraph random_dag(std::size_t n, std::mt19937_64& rng) {
    std::vector<MethodNode> nodes;
    std::vector<CallEdge> edges;
    std::bernoulli_distribution coin(0.3);
    for (std::size_t i = 0; i < n; ++i) {
        nodes.push_back({"m" + std::to_string(i), coin(rng), 0.1, 0.01, 1000, 10});
        if (i == 0) continue;
        std::uniform_int_distribution<std::size_t> parent(0, i - 1);
        edges.push_back({"m" + std::to_string(parent(rng)), "m" + std::to_string(i)});
        for (std::size_t j = 0; j < i; ++j)
            if (coin(rng) && coin(rng)) edges.push_back({"m" + std::to_string(j), "m" + std::to_string(i)});
    }
    return CallGraph(std::move(nodes), std::move(edges), "m0");
}

void BM_ExtractChainsForkJoin(benchmark::State& state) {
    auto g = fork_join(static_cast<int>(state.range(0)), 16);
    for (auto _ : state) benchmark::DoNotOptimize(extract_chains(g));
    state.SetComplexityN(static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_ExtractChainsForkJoin)->RangeMultiplier(4)->Range(2, 512)->Complexity();

void BM_ExtractChainsRandomDag(benchmark::State& state) {
    std::mt19937_64 rng(42);
    auto g = random_dag(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(extract_chains(g));
}
BENCHMARK(BM_ExtractChainsRandomDag)->Arg(16)->Arg(64)->Arg(256);

void BM_SimulateDistributed(benchmark::State& state) {
    const int width = static_cast<int>(state.range(0));
    auto g = fork_join(width, 8);
    std::vector<VmSpec> fleet;
    for (int i = 0; i < width; ++i) fleet.push_back({"vm" + std::to_string(1000 + i)});
    auto plan = build_plan(extract_chains(g), OffloadMode::Distributed, fleet);
    NetworkSpec net{100.0, 0.01};
    for (auto _ : state) benchmark::DoNotOptimize(simulate(g, plan, net));
}
BENCHMARK(BM_SimulateDistributed)->RangeMultiplier(4)->Range(2, 256);

void BM_SimulateWithCrash(benchmark::State& state) {
    auto g = fork_join(8, 8);
    std::vector<VmSpec> fleet;
    for (int i = 0; i < 8; ++i) fleet.push_back({"vm" + std::to_string(i)});
    auto plan = build_plan(extract_chains(g), OffloadMode::Distributed, fleet);
    NetworkSpec net{100.0, 0.01};
    CrashEvent crash{"vm3", CrashTrigger::AtFraction, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(simulate(g, plan, net, crash));
}
BENCHMARK(BM_SimulateWithCrash);

void BM_BestOffloadInterval(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    MethodSequence seq(static_cast<std::size_t>(state.range(0)));
    for (auto& m : seq) m = {u(rng), u(rng) / 4, u(rng) / 3, u(rng) / 3};
    for (auto _ : state) benchmark::DoNotOptimize(best_offload_interval(seq));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BestOffloadInterval)->RangeMultiplier(2)->Range(8, 512)->Complexity(benchmark::oNSquared);

void BM_IntervalUtilities(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    MethodSequence seq(static_cast<std::size_t>(state.range(0)));
    for (auto& m : seq) m = {u(rng), u(rng) / 4, u(rng) / 3, u(rng) / 3};
    for (auto _ : state) benchmark::DoNotOptimize(interval_utilities(seq));
}
BENCHMARK(BM_IntervalUtilities)->Arg(8)->Arg(64)->Arg(512);

}  // namespace
BENCHMARK_MAIN();
