#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "consrate/error.hpp"
#include "consrate/mincut.hpp"
#include "oracles.hpp"

using namespace consrate;

namespace {

void expect_consistent(const Graph& g, const std::vector<double>& costs, const CutResult& cut) {
    double total = 0.0;
    for (const Edge& e : cut.cut_edges) total += costs[*g.edge_index(e.u, e.v)];
    EXPECT_NEAR(cut.value, total, 1e-9);
    EXPECT_NEAR(cut_value(g, costs, cut.side), cut.value, 1e-9);
    ASSERT_FALSE(cut.side.empty());
    ASSERT_FALSE(cut.other.empty());
    EXPECT_EQ(cut.side.front(), 0u);
    EXPECT_EQ(cut.side.size() + cut.other.size(), g.n());
    std::vector<Edge> kept;
    for (const Edge& e : g.edges())
        if (std::find(cut.cut_edges.begin(), cut.cut_edges.end(), e) == cut.cut_edges.end()) kept.push_back(e);
    EXPECT_FALSE(is_connected(Graph(g.n(), kept)));
}

}  // namespace

TEST(StoerWagner, Triangle) {
    const Graph g(3, {{0, 1}, {0, 2}, {1, 2}});
    const std::vector<double> c{1, 2, 3};
    const auto cut = stoer_wagner(g, c);
    EXPECT_DOUBLE_EQ(cut.value, 3.0);
    EXPECT_EQ(cut.side, (std::vector<NodeId>{0}));
    expect_consistent(g, c, cut);
}

TEST(StoerWagner, PathAndCompleteGraph) {
    EXPECT_DOUBLE_EQ(stoer_wagner(path_graph(6), std::vector<double>(5, 1.0)).value, 1.0);
    EXPECT_NEAR(stoer_wagner(complete_graph(4), std::vector<double>(6, 1.0 / 6)).value, 0.5, 1e-15);
}

TEST(StoerWagner, DisconnectedGraphGivesZeroWithComponentOfNodeZero) {
    const Graph g(5, {{0, 3}, {1, 2}, {2, 4}});
    const auto cut = stoer_wagner(g, std::vector<double>(3, 1.0));
    EXPECT_EQ(cut.value, 0.0);
    EXPECT_EQ(cut.side, (std::vector<NodeId>{0, 3}));
    EXPECT_TRUE(cut.cut_edges.empty());
}

TEST(StoerWagner, InfiniteEdgesAreNeverCut) {
    const Graph g = cycle_graph(4);
    const double inf = INFINITY;
    const auto cut = stoer_wagner(g, std::vector<double>{inf, 2.0, 5.0, inf});
    EXPECT_DOUBLE_EQ(cut.value, 7.0);
    EXPECT_TRUE(std::isinf(stoer_wagner(Graph(2, {{0, 1}}), std::vector<double>{inf}).value));
}

TEST(StoerWagner, ZeroCostEdgeIsFreeDisconnection) {
    const auto cut = stoer_wagner(path_graph(4), std::vector<double>{3.0, 0.0, 3.0});
    EXPECT_EQ(cut.value, 0.0);
    EXPECT_EQ(cut.side, (std::vector<NodeId>{0, 1}));
}

TEST(StoerWagner, RejectsBadInput) {
    EXPECT_THROW(stoer_wagner(Graph(1), std::vector<double>{}), InvalidInput);
    EXPECT_THROW(stoer_wagner(path_graph(3), std::vector<double>{1.0, -1.0}), InvalidInput);
    EXPECT_THROW(stoer_wagner(path_graph(3), std::vector<double>{1.0}), InvalidInput);
}

TEST(Exhaustive, SmallCasesAndCap) {
    EXPECT_DOUBLE_EQ(exhaustive_mincut(Graph(2, {{0, 1}}), std::vector<double>{5.0}).value, 5.0);
    EXPECT_DOUBLE_EQ(exhaustive_mincut(star_graph(4), std::vector<double>{1.0, 2.0, 3.0}).value, 1.0);
    EXPECT_THROW(exhaustive_mincut(path_graph(17), std::vector<double>(16, 1.0)), CapacityError);
}

TEST(MinCutProperties, StoerWagnerEqualsExhaustiveOnRandomGraphs) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng() % 9;
        const Graph g = trial % 5 == 0 ? oracle::random_graph(n, 0.4, rng) : oracle::random_connected_graph(n, 0.35, rng);
        auto costs = oracle::random_uniforms(g.num_edges(), 0.0, 3.0, rng);
        if (trial % 7 == 0)  // integer costs create ties
            for (auto& c : costs) c = std::floor(c);
        const auto sw = stoer_wagner(g, costs);
        const auto ex = exhaustive_mincut(g, costs);
        ASSERT_NEAR(sw.value, ex.value, 1e-9) << "trial " << trial;
        ASSERT_NEAR(sw.value, oracle::mincut(n, oracle::edges_of(g), costs), 1e-9);
        if (is_connected(g)) expect_consistent(g, costs, sw);
    }
}

TEST(MinCutProperties, RelabelingInvariance) {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng() % 7;
        const Graph g = oracle::random_connected_graph(n, 0.4, rng);
        const auto costs = oracle::random_uniforms(g.num_edges(), 0.1, 2.0, rng);
        std::vector<NodeId> perm(n);
        std::iota(perm.begin(), perm.end(), NodeId{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Edge> edges;
        std::vector<std::optional<double>> attrs;
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
            edges.push_back({perm[g.edge(e).u], perm[g.edge(e).v]});
            attrs.push_back(costs[e]);
        }
        const Graph h(n, edges, attrs);
        EXPECT_NEAR(stoer_wagner(g, costs).value, stoer_wagner(h, h.attributes()).value, 1e-9);
    }
}

TEST(MinCutProperties, ScalingCostsScalesValue) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        const Graph g = oracle::random_connected_graph(2 + rng() % 8, 0.4, rng);
        auto costs = oracle::random_uniforms(g.num_edges(), 0.1, 2.0, rng);
        const double lambda = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
        const auto base = stoer_wagner(g, costs);
        for (auto& c : costs) c *= lambda;
        const auto scaled = stoer_wagner(g, costs);
        EXPECT_NEAR(scaled.value, lambda * base.value, 1e-9 * std::max(1.0, lambda));
        EXPECT_NEAR(cut_value(g, costs, base.side), scaled.value, 1e-9 * std::max(1.0, lambda));
    }
}

TEST(MinCutProperties, DeterministicTieBreak) {
    const Graph g = cycle_graph(6);
    const std::vector<double> c(6, 1.0);
    const auto a = stoer_wagner(g, c);
    const auto b = stoer_wagner(g, c);
    EXPECT_EQ(a.side, b.side);
    EXPECT_EQ(a.cut_edges, b.cut_edges);
    EXPECT_DOUBLE_EQ(a.value, 2.0);
}
