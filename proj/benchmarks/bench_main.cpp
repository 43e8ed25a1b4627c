#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "consrate/detect.hpp"
#include "consrate/mincut.hpp"
#include "consrate/simulate.hpp"

using namespace consrate;

namespace {

Graph random_dense_graph(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) edges.push_back({static_cast<NodeId>(rng() % v), v});
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
            if (rng() % 4 == 0 && std::find(edges.begin(), edges.end(), Edge{a, b}) == edges.end()) edges.push_back({a, b});
    return Graph(n, edges);
}

void BM_StoerWagner(benchmark::State& state) {
    const Graph g = random_dense_graph(static_cast<std::size_t>(state.range(0)), 3);
    std::mt19937_64 rng(4);
    std::vector<double> costs(g.num_edges());
    for (auto& c : costs) c = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    for (auto _ : state) benchmark::DoNotOptimize(stoer_wagner(g, costs).value);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StoerWagner)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

void BM_ErrorNorm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Eigen::MatrixXd w = metropolis_weights(cycle_graph(n)).dense();
    const Eigen::MatrixXd phi = w * w * w;
    for (auto _ : state) benchmark::DoNotOptimize(error_norm(phi));
}
BENCHMARK(BM_ErrorNorm)->Arg(5)->Arg(14)->Arg(50);

void BM_TailFastPath(benchmark::State& state) {
    const auto model = NetworkModel::link_failure(complete_graph(6), std::vector<double>(15, 0.2));
    SimulationOptions opt;
    opt.graph_fast_path = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_tail(model, 8, 1.0, 10000, 1, opt).hits);
    state.SetItemsProcessed(state.iterations() * 10000);
    state.SetLabel(opt.graph_fast_path ? "graph-only" : "matrix");
}
BENCHMARK(BM_TailFastPath)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Detection(benchmark::State& state) {
    const auto net = random_geometric_network(14, 38, 2024);
    DetectionConfig cfg{NetworkModel::link_failure(net.graph, std::vector<double>(38, 0.3))};
    cfg.m = 0.0447;
    cfg.horizon = 200;
    cfg.trials = 1000;
    for (auto _ : state) benchmark::DoNotOptimize(run_detection(cfg).worst_error.back());
    state.SetItemsProcessed(state.iterations() * 200 * 1000);
}
BENCHMARK(BM_Detection)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
