#include "consrate/collections.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "consrate/error.hpp"

namespace consrate {

std::string to_string(RateMethod method) {
    switch (method) {
        case RateMethod::Brute: return "brute";
        case RateMethod::MinCut: return "mincut";
        case RateMethod::ClosedForm: return "closed-form";
        case RateMethod::Empirical: return "empirical";
    }
    return "unknown";
}

bool RateResult::finite() const { return std::isfinite(rate); }

RateResult rate_from_p_max(double p_max, RateMethod method) {
    RateResult r;
    r.p_max = std::clamp(p_max, 0.0, 1.0);
    r.rate = r.p_max > 0.0 ? -std::log(r.p_max) : std::numeric_limits<double>::infinity();
    if (r.rate == 0.0) r.rate = 0.0;  // drop the sign of -0
    r.method = method;
    return r;
}

namespace {

/// Incrementally maintained union of edge masks with per-node adjacency bitsets.
class EdgeUnion {
public:
    EdgeUnion(std::size_t n, const std::vector<Edge>& edges) : n_(n), edges_(edges), count_(edges.size(), 0), adj_(n, 0) {}

    void add(std::uint64_t mask) {
        for (std::uint64_t m = mask; m != 0; m &= m - 1) {
            const auto e = static_cast<std::size_t>(std::countr_zero(m));
            if (count_[e]++ == 0) set(e, true);
        }
    }
    void remove(std::uint64_t mask) {
        for (std::uint64_t m = mask; m != 0; m &= m - 1) {
            const auto e = static_cast<std::size_t>(std::countr_zero(m));
            if (--count_[e] == 0) set(e, false);
        }
    }

    bool connected() const { return connected_with(0); }

    /// Connectivity of the union plus the edges of `extra`, without modifying state.
    bool connected_with(std::uint64_t extra) const {
        std::vector<std::uint64_t> adj = adj_;
        for (std::uint64_t m = extra; m != 0; m &= m - 1) {
            const Edge& e = edges_[static_cast<std::size_t>(std::countr_zero(m))];
            adj[e.u] |= std::uint64_t{1} << e.v;
            adj[e.v] |= std::uint64_t{1} << e.u;
        }
        return spans(adj);
    }

    std::uint64_t edge_mask() const {
        std::uint64_t m = 0;
        for (std::size_t e = 0; e < count_.size(); ++e)
            if (count_[e] > 0) m |= std::uint64_t{1} << e;
        return m;
    }

private:
    void set(std::size_t e, bool on) {
        const Edge& ed = edges_[e];
        if (on) {
            adj_[ed.u] |= std::uint64_t{1} << ed.v;
            adj_[ed.v] |= std::uint64_t{1} << ed.u;
        } else {
            adj_[ed.u] &= ~(std::uint64_t{1} << ed.v);
            adj_[ed.v] &= ~(std::uint64_t{1} << ed.u);
        }
    }

    bool spans(const std::vector<std::uint64_t>& adj) const {
        const std::uint64_t all = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
        std::uint64_t seen = 1;
        std::uint64_t frontier = 1;
        while (frontier != 0) {
            std::uint64_t next = 0;
            for (std::uint64_t f = frontier; f != 0; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
            frontier = next & ~seen;
            seen |= next;
        }
        return seen == all;
    }

    std::size_t n_;
    const std::vector<Edge>& edges_;
    std::vector<std::uint32_t> count_;
    std::vector<std::uint64_t> adj_;
};

void require_node_capacity(const NetworkModel& model) {
    if (model.n() > 64) throw CapacityError("collection enumeration needs at most 64 nodes", 64);
}

struct FiniteSupport {
    std::vector<std::uint64_t> masks;
    std::vector<double> probs;
};

FiniteSupport finite_support_of(const NetworkModel& model, std::size_t cap) {
    require_node_capacity(model);
    FiniteSupport s;
    for (const auto& [mask, p] : model.finite_support()) {
        s.masks.push_back(mask);
        s.probs.push_back(p);
    }
    if (s.masks.size() > std::min<std::size_t>(cap, 30))
        throw CapacityError("collection enumeration over 2^" + std::to_string(s.masks.size()) + " subsets", cap);
    return s;
}

Collection make_collection(const NetworkModel& model, const FiniteSupport& s, std::uint64_t subset) {
    Collection c;
    std::uint64_t edges = 0;
    for (std::size_t k = 0; k < s.masks.size(); ++k) {
        if (subset >> k & 1U) {
            c.members.push_back(k);
            c.mass += s.probs[k];
            edges |= s.masks[k];
        }
    }
    c.supergraph = model.base_graph().subgraph(edges);
    return c;
}

enum class Want { Maximal, Disconnected };

/// Gray-code walk over all nonempty subsets of the support.
std::vector<std::uint64_t> walk_subsets(const NetworkModel& model, const FiniteSupport& s, Want want) {
    const std::size_t m = s.masks.size();
    EdgeUnion uni(model.n(), model.base_graph().edges());
    std::vector<std::uint64_t> found;
    std::uint64_t subset = 0;
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t i = 1; i < total; ++i) {
        const auto flip = static_cast<std::size_t>(std::countr_zero(i));
        const std::uint64_t bit = std::uint64_t{1} << flip;
        if (subset & bit) uni.remove(s.masks[flip]);
        else uni.add(s.masks[flip]);
        subset ^= bit;

        if (uni.connected()) continue;
        if (want == Want::Disconnected) {
            found.push_back(subset);
            continue;
        }
        bool maximal = true;
        for (std::size_t k = 0; k < m && maximal; ++k)
            if (!(subset >> k & 1U) && !uni.connected_with(s.masks[k])) maximal = false;
        if (maximal) found.push_back(subset);
    }
    return found;
}

std::vector<Collection> to_sorted_collections(const NetworkModel& model, const FiniteSupport& s,
                                              const std::vector<std::uint64_t>& subsets) {
    std::vector<Collection> out;
    out.reserve(subsets.size());
    for (std::uint64_t sub : subsets) out.push_back(make_collection(model, s, sub));
    std::sort(out.begin(), out.end(), [](const Collection& a, const Collection& b) { return a.members < b.members; });
    return out;
}

bool induces_connected(const Graph& g, std::uint64_t node_set) {
    if (node_set == 0) return false;
    UnionFind uf(g.n());
    for (const Edge& e : g.edges())
        if ((node_set >> e.u & 1U) && (node_set >> e.v & 1U)) uf.unite(e.u, e.v);
    // components inside node_set == popcount - merges; count roots within the set
    std::size_t roots = 0;
    for (NodeId i = 0; i < g.n(); ++i)
        if ((node_set >> i & 1U) && uf.find(i) == i) ++roots;
    return roots == 1;
}

std::vector<Collection> link_failure_maximal(const NetworkModel& model, std::size_t cap) {
    const Graph& base = model.base_graph();
    const std::size_t num_edges = base.num_edges();
    if (num_edges > std::min<std::size_t>(cap, 30))
        throw CapacityError("link-failure collection enumeration with " + std::to_string(num_edges) + " edges", cap);
    require_node_capacity(model);
    const auto& p = model.edge_probabilities();
    const std::uint64_t all_edges = (std::uint64_t{1} << num_edges) - 1;

    auto collection_for = [&](std::uint64_t removed) {
        Collection c;
        const std::uint64_t kept = all_edges & ~removed;
        // subsets of `kept`, ascending: these are exactly the member indices
        std::uint64_t sub = 0;
        do {
            c.members.push_back(sub);
            sub = (sub - kept) & kept;
        } while (sub != 0);
        c.supergraph = base.subgraph(kept);
        c.mass = 1.0;
        for (std::size_t e = 0; e < num_edges; ++e)
            if (removed >> e & 1U) c.mass *= 1.0 - p[e];
        return c;
    };

    std::vector<Collection> out;
    if (!is_connected(base)) {
        out.push_back(collection_for(0));
        return out;
    }
    const std::size_t n = base.n();
    const std::uint64_t all_nodes = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t rest = 0; rest < (std::uint64_t{1} << (n - 1)) - 1; ++rest) {
        const std::uint64_t side = 1 | (rest << 1);  // node 0 always in S
        const std::uint64_t other = all_nodes & ~side;
        if (!induces_connected(base, side) || !induces_connected(base, other)) continue;
        std::uint64_t removed = 0;
        for (std::size_t e = 0; e < num_edges; ++e) {
            const Edge& ed = base.edge(e);
            if ((side >> ed.u & 1U) != (side >> ed.v & 1U)) removed |= std::uint64_t{1} << e;
        }
        out.push_back(collection_for(removed));
    }
    return out;
}

}  // namespace

bool is_disconnected_collection(const NetworkModel& model, std::span<const std::size_t> members, std::size_t cap) {
    const std::size_t count = model.realizable_count(cap);
    if (model.kind() == ModelKind::LinkFailure) {
        std::uint64_t edges = 0;
        for (std::size_t idx : members) {
            if (idx >= count) throw InvalidInput("collection member index out of range");
            edges |= idx;
        }
        return !is_connected(model.base_graph().subgraph(edges));
    }
    const auto graphs = model.realizable_graphs(cap);
    std::vector<Graph> chosen;
    for (std::size_t idx : members) {
        if (idx >= graphs.size()) throw InvalidInput("collection member index out of range");
        chosen.push_back(graphs[idx]);
    }
    return !is_connected(supergraph(chosen, model.n()));
}

std::vector<Collection> enumerate_maximal_collections(const NetworkModel& model, std::size_t cap) {
    if (model.kind() == ModelKind::LinkFailure) return link_failure_maximal(model, cap);
    const FiniteSupport s = finite_support_of(model, cap);
    return to_sorted_collections(model, s, walk_subsets(model, s, Want::Maximal));
}

std::vector<Collection> enumerate_disconnected_collections(const NetworkModel& model, std::size_t cap) {
    if (model.kind() == ModelKind::LinkFailure)
        throw InvalidInput("disconnected-collection listing over 2^(2^|E|) sets is not supported for link failure");
    const FiniteSupport s = finite_support_of(model, cap);
    return to_sorted_collections(model, s, walk_subsets(model, s, Want::Disconnected));
}

RateResult p_max_brute(const NetworkModel& model, std::size_t cap) {
    auto maximal = enumerate_maximal_collections(model, cap);
    if (maximal.empty()) return rate_from_p_max(0.0, RateMethod::Brute);
    std::size_t best = 0;
    for (std::size_t k = 1; k < maximal.size(); ++k)
        if (maximal[k].mass > maximal[best].mass) best = k;
    RateResult r = rate_from_p_max(maximal[best].mass, RateMethod::Brute);
    r.collection = std::move(maximal[best]);
    return r;
}

double p_max_over_all_disconnected(const NetworkModel& model, std::size_t cap) {
    if (model.kind() == ModelKind::LinkFailure) {
        const Graph& base = model.base_graph();
        const std::size_t num_edges = base.num_edges();
        if (num_edges > std::min<std::size_t>(cap, 30))
            throw CapacityError("disconnecting edge-set enumeration with " + std::to_string(num_edges) + " edges", cap);
        const auto& p = model.edge_probabilities();
        const std::uint64_t all = (std::uint64_t{1} << num_edges) - 1;
        double best = 0.0;
        for (std::uint64_t removed = 0; removed <= all; ++removed) {
            if (is_connected(base.subgraph(all & ~removed))) continue;
            double mass = 1.0;
            for (std::size_t e = 0; e < num_edges; ++e)
                if (removed >> e & 1U) mass *= 1.0 - p[e];
            best = std::max(best, mass);
        }
        return best;
    }
    const FiniteSupport s = finite_support_of(model, cap);
    double best = 0.0;
    for (std::uint64_t sub : walk_subsets(model, s, Want::Disconnected)) {
        double mass = 0.0;
        for (std::size_t k = 0; k < s.probs.size(); ++k)
            if (sub >> k & 1U) mass += s.probs[k];
        best = std::max(best, mass);
    }
    return best;
}

}  // namespace consrate
