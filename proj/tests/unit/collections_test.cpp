#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "consrate/collections.hpp"
#include "consrate/error.hpp"
#include "consrate/rate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace consrate;

namespace {

std::uint64_t bits_of(const Collection& c) {
    std::uint64_t b = 0;
    for (auto m : c.members) b |= std::uint64_t{1} << m;
    return b;
}

NetworkModel random_explicit(std::mt19937_64& rng, std::size_t n, std::size_t count, double density) {
    count = std::min<std::size_t>(count, std::size_t{1} << (n * (n - 1) / 2));
    std::vector<Realization> r;
    while (r.size() < count) {
        const Graph g = oracle::random_graph(n, density, rng);
        if (std::none_of(r.begin(), r.end(), [&](const Realization& x) { return x.graph == g; }))
            r.push_back({g, 0.0, std::nullopt});
    }
    const auto p = oracle::random_simplex(count, rng);
    for (std::size_t k = 0; k < count; ++k) r[k].probability = p[k];
    return NetworkModel::explicit_model(n, std::move(r), 0.01);
}

}  // namespace

TEST(DisconnectedCollection, ToyInstance) {
    const auto toy = fixtures::toy_model();
    EXPECT_TRUE(is_disconnected_collection(toy, std::vector<std::size_t>{0, 2}));
    EXPECT_FALSE(is_disconnected_collection(toy, std::vector<std::size_t>{0, 1}));
    EXPECT_TRUE(is_disconnected_collection(toy, std::vector<std::size_t>{}));
    EXPECT_THROW(is_disconnected_collection(toy, std::vector<std::size_t>{3}), InvalidInput);
}

TEST(DisconnectedCollection, FullBaseGraphIsConnected) {
    const auto lf = NetworkModel::link_failure(cycle_graph(4), std::vector<double>(4, 0.5));
    EXPECT_FALSE(is_disconnected_collection(lf, std::vector<std::size_t>{15}));
    EXPECT_TRUE(is_disconnected_collection(lf, std::vector<std::size_t>{3, 1, 2}));
    EXPECT_FALSE(is_disconnected_collection(lf, std::vector<std::size_t>{3, 12}));
}

TEST(MaximalCollections, ToyHasExactlyTwo) {
    const auto maximal = enumerate_maximal_collections(fixtures::toy_model());
    ASSERT_EQ(maximal.size(), 2u);
    EXPECT_EQ(maximal[0].members, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(maximal[1].members, (std::vector<std::size_t>{1}));
    EXPECT_NEAR(maximal[0].mass, 2.0 / 3, 1e-15);
    EXPECT_FALSE(is_connected(maximal[0].supergraph));
}

TEST(MaximalCollections, GossipK4MatchesDefinition) {
    const auto model = fixtures::k4_gossip();
    const auto maximal = enumerate_maximal_collections(model);
    auto expected = oracle::maximal_collections(model);
    std::vector<std::uint64_t> got;
    for (const auto& c : maximal) got.push_back(bits_of(c));
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(got, expected);
    // 4 triangles (isolate one vertex) and 3 perfect-matching complements (two pairs)
    EXPECT_EQ(maximal.size(), 7u);
    int triangles = 0;
    for (const auto& c : maximal) triangles += c.members.size() == 3;
    EXPECT_EQ(triangles, 4);
}

TEST(MaximalCollections, EmptyWhenEveryRealizationConnected) {
    const auto model = NetworkModel::explicit_model(
        4, {{path_graph(4), 0.5, std::nullopt}, {star_graph(4), 0.5, std::nullopt}});
    EXPECT_TRUE(enumerate_maximal_collections(model).empty());
    const auto r = p_max_brute(model);
    EXPECT_TRUE(std::isinf(r.rate));
    EXPECT_EQ(r.p_max, 0.0);
    EXPECT_FALSE(r.finite());
    EXPECT_EQ(p_max_over_all_disconnected(model), 0.0);
}

TEST(MaximalCollections, CapExceeded) {
    std::vector<Realization> r;
    for (std::size_t k = 0; k < 21; ++k) r.push_back({Graph(7, {{k % 7, (k + 1 + k / 7) % 7}}), 1.0 / 21, std::nullopt});
    const auto model = NetworkModel::explicit_model(7, std::move(r));
    EXPECT_THROW(enumerate_maximal_collections(model), CapacityError);
    EXPECT_THROW(enumerate_maximal_collections(fixtures::toy_model(), 2), CapacityError);
}

TEST(PMaxBrute, KnownValues) {
    const auto k4 = p_max_brute(fixtures::k4_gossip());
    EXPECT_NEAR(k4.p_max, 0.5, 1e-12);
    EXPECT_NEAR(k4.rate, std::numbers::ln2, 1e-12);
    EXPECT_EQ(k4.method, RateMethod::Brute);

    const auto skew = p_max_brute(fixtures::toy_model(0.2, 0.5, 0.3));
    EXPECT_NEAR(skew.p_max, 0.5, 1e-12);
    EXPECT_NEAR(skew.rate, std::numbers::ln2, 1e-12);
    // tie between {G2} (0.5) and {G1, G3} (0.5): first in order wins
    ASSERT_TRUE(skew.collection.has_value());
    EXPECT_EQ(skew.collection->members, (std::vector<std::size_t>{0, 2}));

    const auto uniform = p_max_brute(fixtures::toy_model());
    EXPECT_NEAR(uniform.p_max, 2.0 / 3, 1e-12);
    EXPECT_NEAR(uniform.rate, -std::log(2.0 / 3), 1e-12);
}

TEST(PMaxOverAll, KnownValues) {
    EXPECT_NEAR(p_max_over_all_disconnected(fixtures::toy_model()), 2.0 / 3, 1e-12);
    EXPECT_NEAR(p_max_over_all_disconnected(fixtures::k4_gossip()), 0.5, 1e-12);
}

TEST(LinkFailureCollections, BondsMatchDefinitionOnSmallGraphs) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        const Graph g = oracle::random_connected_graph(4, 0.3, rng, 4);
        const auto model = NetworkModel::link_failure(g, oracle::random_uniforms(g.num_edges(), 0.05, 0.95, rng));
        auto expected = oracle::maximal_collections(model);
        std::vector<std::uint64_t> got;
        for (const auto& c : enumerate_maximal_collections(model)) got.push_back(bits_of(c));
        std::sort(got.begin(), got.end());
        std::sort(expected.begin(), expected.end());
        EXPECT_EQ(got, expected) << "trial " << trial;
    }
}

TEST(LinkFailureCollections, DisconnectedBaseGivesOneFullCollection) {
    const auto model = NetworkModel::link_failure(Graph(4, {{0, 1}, {2, 3}}), {0.5, 0.7});
    const auto maximal = enumerate_maximal_collections(model);
    ASSERT_EQ(maximal.size(), 1u);
    EXPECT_EQ(maximal[0].members.size(), 4u);
    EXPECT_DOUBLE_EQ(maximal[0].mass, 1.0);
    EXPECT_EQ(p_max_brute(model).rate, 0.0);
}

// Property suite on random explicit and gossip models with |G| <= 12.
TEST(CollectionProperties, MaximalityObservationAndRelaxation) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + rng() % 4;
        const NetworkModel model = trial % 2 == 0
                                       ? random_explicit(rng, n, 2 + rng() % 10, 0.15 + 0.1 * (trial % 4))
                                       : [&] {
                                             const Graph g = oracle::random_connected_graph(n, 0.4, rng, 12);
                                             return NetworkModel::gossip(g, oracle::random_simplex(g.num_edges(), rng));
                                         }();
        const auto maximal = enumerate_maximal_collections(model);
        const auto all = enumerate_disconnected_collections(model);

        std::vector<std::uint64_t> max_bits;
        for (const auto& c : maximal) max_bits.push_back(bits_of(c));
        auto expected = oracle::maximal_collections(model);
        std::sort(expected.begin(), expected.end());
        auto sorted = max_bits;
        std::sort(sorted.begin(), sorted.end());
        ASSERT_EQ(sorted, expected) << "trial " << trial;

        std::vector<std::uint64_t> all_bits;
        for (const auto& c : all) all_bits.push_back(bits_of(c));
        for (auto m : max_bits) EXPECT_NE(std::find(all_bits.begin(), all_bits.end(), m), all_bits.end());
        for (auto a : max_bits)
            for (auto b : max_bits)
                if (a != b) EXPECT_NE(a & b, a) << "maximal collection strictly inside another";
        for (auto h : all_bits) {
            bool covered = false;
            for (auto m : max_bits) covered = covered || (h & m) == h;
            EXPECT_TRUE(covered) << "disconnected collection not inside any maximal one";
        }
        const double brute = p_max_brute(model).p_max;
        EXPECT_NEAR(brute, p_max_over_all_disconnected(model), 1e-12);
        EXPECT_NEAR(brute, oracle::p_max_all_subsets(model), 1e-12);
        for (const auto& c : maximal) {
            double mass = 0.0;
            const auto graphs = model.realizable_graphs();
            for (auto m : c.members) mass += model.graph_probability(graphs[m]);
            EXPECT_NEAR(c.mass, mass, 1e-12);
        }
    }
}

TEST(CollectionProperties, GossipBruteForceEqualsOneMinusMinCut) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng() % 6;
        const Graph g = oracle::random_connected_graph(n, 0.35, rng, 14);
        const auto p = oracle::random_simplex(g.num_edges(), rng);
        const auto brute = p_max_brute(NetworkModel::gossip(g, p));
        const auto cut = gossip_rate(g, p);
        EXPECT_NEAR(brute.p_max, cut.p_max, 1e-9);
        EXPECT_NEAR(brute.p_max, 1.0 - oracle::mincut(n, oracle::edges_of(g), p), 1e-9);
    }
}

TEST(RateResult, RateFromPMax) {
    const auto r = rate_from_p_max(0.25, RateMethod::ClosedForm);
    EXPECT_NEAR(r.rate, std::log(4.0), 1e-15);
    EXPECT_EQ(to_string(r.method), "closed-form");
    EXPECT_EQ(rate_from_p_max(1.0, RateMethod::Brute).rate, 0.0);
    EXPECT_FALSE(std::signbit(rate_from_p_max(1.0, RateMethod::Brute).rate));
}
