#include "consrate/mincut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "consrate/error.hpp"

namespace consrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(const Graph& g, std::span<const double> costs) {
    if (g.n() < 2) throw InvalidInput("min-cut needs at least 2 nodes");
    if (costs.size() != g.num_edges()) throw InvalidInput("min-cut: one cost per edge required");
    for (double c : costs)
        if (!(c >= 0.0)) throw InvalidInput("min-cut: edge costs must be nonnegative");
}

// S is normalised to the side holding node 0.
CutResult make_result(const Graph& g, std::span<const double> costs, std::vector<char> in_side) {
    if (!in_side[0])
        for (char& c : in_side) c = static_cast<char>(!c);
    CutResult r;
    for (NodeId i = 0; i < g.n(); ++i) (in_side[i] ? r.side : r.other).push_back(i);
    r.value = 0.0;
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const Edge& e = g.edge(k);
        if (in_side[e.u] != in_side[e.v]) {
            r.cut_edges.push_back(e);
            r.value += costs[k];
        }
    }
    return r;
}

}  // namespace

double cut_value(const Graph& g, std::span<const double> costs, std::span<const NodeId> side) {
    std::vector<char> in_side(g.n(), 0);
    for (NodeId i : side) in_side.at(i) = 1;
    double total = 0.0;
    for (std::size_t k = 0; k < g.num_edges(); ++k)
        if (in_side[g.edge(k).u] != in_side[g.edge(k).v]) total += costs[k];
    return total;
}

CutResult stoer_wagner(const Graph& g, std::span<const double> costs) {
    check_inputs(g, costs);
    const std::size_t n = g.n();

    if (!is_connected(g)) {
        const auto comps = connected_components(g);
        std::vector<char> in_side(n, 0);
        for (NodeId i : comps.front()) in_side[i] = 1;
        return make_result(g, costs, std::move(in_side));
    }

    // Contract uncuttable edges; every super-node keeps the list of original nodes.
    UnionFind uf(n);
    for (std::size_t k = 0; k < g.num_edges(); ++k)
        if (std::isinf(costs[k])) uf.unite(g.edge(k).u, g.edge(k).v);
    std::vector<std::size_t> label(n, n);
    std::vector<std::vector<NodeId>> members;
    for (NodeId i = 0; i < n; ++i) {
        const std::size_t root = uf.find(i);
        if (label[root] == n) {
            label[root] = members.size();
            members.emplace_back();
        }
        label[i] = label[root];
        members[label[i]].push_back(i);
    }
    const std::size_t m = members.size();
    if (m == 1) {
        // Every cut crosses an uncuttable edge.
        std::vector<char> in_side(n, 0);
        in_side[0] = 1;
        CutResult r = make_result(g, costs, std::move(in_side));
        r.value = kInf;
        return r;
    }

    std::vector<std::vector<double>> w(m, std::vector<double>(m, 0.0));
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const std::size_t a = label[g.edge(k).u];
        const std::size_t b = label[g.edge(k).v];
        if (a == b) continue;
        w[a][b] += costs[k];
        w[b][a] += costs[k];
    }

    std::vector<char> active(m, 1);
    double best = kInf;
    std::vector<std::size_t> best_group;

    std::vector<double> key(m);
    std::vector<char> added(m);
    for (std::size_t phase = 0; phase + 1 < m; ++phase) {
        std::fill(key.begin(), key.end(), 0.0);
        std::fill(added.begin(), added.end(), 0);
        std::size_t prev = m;
        std::size_t last = m;
        const std::size_t remaining = m - phase;
        for (std::size_t step = 0; step < remaining; ++step) {
            std::size_t sel = m;
            for (std::size_t v = 0; v < m; ++v)
                if (active[v] && !added[v] && (sel == m || key[v] > key[sel])) sel = v;
            added[sel] = 1;
            prev = last;
            last = sel;
            for (std::size_t v = 0; v < m; ++v)
                if (active[v] && !added[v]) key[v] += w[sel][v];
        }
        // cut of the phase: `last` against everything else
        if (key[last] < best) {
            best = key[last];
            best_group = members[last];
        }
        // merge last into prev
        members[prev].insert(members[prev].end(), members[last].begin(), members[last].end());
        for (std::size_t v = 0; v < m; ++v) {
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0.0;
        active[last] = 0;
    }

    std::vector<char> in_side(n, 0);
    for (NodeId i : best_group) in_side[i] = 1;
    return make_result(g, costs, std::move(in_side));
}

CutResult exhaustive_mincut(const Graph& g, std::span<const double> costs) {
    check_inputs(g, costs);
    const std::size_t n = g.n();
    if (n > 16) throw CapacityError("exhaustive min-cut over 2^(n-1) bipartitions", 16);
    // Node n-1 always stays outside S, so each bipartition is visited once.
    const std::uint32_t limit = std::uint32_t{1} << (n - 1);
    double best = kInf;
    std::uint32_t best_mask = 1;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        double value = 0.0;
        for (std::size_t k = 0; k < g.num_edges(); ++k) {
            const Edge& e = g.edge(k);
            if ((mask >> e.u & 1U) != (mask >> e.v & 1U)) value += costs[k];
        }
        if (value < best) {
            best = value;
            best_mask = mask;
        }
    }
    std::vector<char> in_side(n, 0);
    for (NodeId i = 0; i + 1 < n; ++i) in_side[i] = static_cast<char>(best_mask >> i & 1U);
    return make_result(g, costs, std::move(in_side));
}

}  // namespace consrate
