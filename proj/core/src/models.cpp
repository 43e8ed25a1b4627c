#include "consrate/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "consrate/error.hpp"

namespace consrate {

namespace {

constexpr double kProbabilitySumTol = 1e-12;
constexpr double kRowSumTol = 1e-12;
// Relative slack on delta comparisons; Metropolis diagonals are 1 - sum and can land an ulp under 1/n.
constexpr double kDeltaSlack = 1e-12;

void require_distribution(const std::vector<double>& p, const std::string& what) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || v > 1.0) throw InvalidInput(what + ": probabilities must lie in [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTol) {
        std::ostringstream msg;
        msg << what << ": probabilities sum to " << sum << ", expected 1";
        throw InvalidInput(msg.str());
    }
}

std::vector<double> cumulative_of(const std::vector<double>& p) {
    std::vector<double> cum(p.size());
    std::partial_sum(p.begin(), p.end(), cum.begin());
    return cum;
}

}  // namespace

std::vector<std::string> matrix_violations(const Eigen::MatrixXd& w, double delta) {
    std::vector<std::string> out;
    if (w.rows() != w.cols()) {
        out.emplace_back("matrix is not square");
        return out;
    }
    const Eigen::Index n = w.rows();
    auto at = [](Eigen::Index i, Eigen::Index j) {
        return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = w(i, j);
            row += v;
            if (!(v >= 0.0)) out.push_back("negative entry at " + at(i, j));
            if (w(i, j) != w(j, i)) out.push_back("asymmetric at " + at(i, j));
            if (v > 0.0 && v < delta * (1.0 - kDeltaSlack)) out.push_back("positive entry below delta at " + at(i, j));
        }
        if (w(i, i) < delta * (1.0 - kDeltaSlack)) out.push_back("diagonal below delta at " + at(i, i));
        if (std::abs(row - 1.0) > kRowSumTol) out.push_back("row " + std::to_string(i) + " does not sum to 1");
    }
    return out;
}

StochasticMatrix StochasticMatrix::validate(Eigen::MatrixXd values, double delta) {
    if (!(delta > 0.0) || delta > 0.5) throw InvalidInput("delta must lie in (0, 1/2]");
    const auto problems = matrix_violations(values, delta);
    if (!problems.empty()) throw InvalidInput("invalid averaging matrix: " + problems.front());
    return StochasticMatrix(std::move(values), delta);
}

Graph StochasticMatrix::induced_graph() const {
    std::vector<Edge> edges;
    const Eigen::Index n = values_.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (values_(i, j) > 0.0) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    return Graph(static_cast<std::size_t>(n), std::move(edges));
}

Eigen::MatrixXd SparseWeights::dense() const {
    const auto n = static_cast<Eigen::Index>(diagonal.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) w(i, i) = diagonal[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto u = static_cast<Eigen::Index>(edges[k].u);
        const auto v = static_cast<Eigen::Index>(edges[k].v);
        w(u, v) = weights[k];
        w(v, u) = weights[k];
    }
    return w;
}

namespace {

void metropolis_into(std::size_t n, const std::vector<Edge>& edges, SparseWeights& out) {
    out.diagonal.assign(n, 1.0);
    out.edges.assign(edges.begin(), edges.end());
    out.weights.resize(edges.size());
    std::vector<std::size_t> deg(n, 0);
    for (const Edge& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const Edge& e = edges[k];
        const double w = 1.0 / (1.0 + static_cast<double>(std::max(deg[e.u], deg[e.v])));
        out.weights[k] = w;
        out.diagonal[e.u] -= w;
        out.diagonal[e.v] -= w;
    }
}

}  // namespace

SparseWeights metropolis_weights(const Graph& g) {
    SparseWeights w;
    metropolis_into(g.n(), g.edges(), w);
    return w;
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Gossip: return "gossip";
        case ModelKind::LinkFailure: return "link_failure";
        case ModelKind::DAdjacent: return "d_adjacent";
        case ModelKind::Explicit: return "explicit";
    }
    return "unknown";
}

void NetworkModel::build_support(std::vector<Graph> graphs, std::vector<double> probs,
                                 std::vector<SparseWeights> weights) {
    support_ = std::move(graphs);
    support_p_ = std::move(probs);
    support_weights_ = std::move(weights);
    cumulative_ = cumulative_of(support_p_);
    support_masks_.clear();
    if (base_.num_edges() <= 64) {
        for (const Graph& g : support_) support_masks_.push_back(mask_of(g));
    }
}

NetworkModel NetworkModel::gossip(Graph base, std::vector<double> edge_probability, GossipAlpha alpha,
                                  double delta) {
    if (base.n() < 2) throw InvalidInput("gossip model needs at least 2 nodes");
    if (base.num_edges() == 0) throw InvalidInput("gossip model needs at least one edge");
    if (edge_probability.size() != base.num_edges())
        throw InvalidInput("gossip model: one probability per edge required");
    require_distribution(edge_probability, "gossip model");
    if (!(delta > 0.0) || delta > 0.5) throw InvalidInput("gossip model: delta must lie in (0, 1/2]");
    if (!alpha.uniform_draw && (alpha.fixed < delta || alpha.fixed > 1.0 - delta))
        throw InvalidInput("gossip model: alpha must lie in [delta, 1 - delta]");

    NetworkModel m;
    m.kind_ = ModelKind::Gossip;
    m.base_ = Graph(base.n(), base.edges());
    m.delta_ = delta;
    m.edge_p_ = std::move(edge_probability);
    m.alpha_ = alpha;
    std::vector<Graph> graphs;
    for (const Edge& e : m.base_.edges()) graphs.emplace_back(m.base_.n(), std::vector<Edge>{e});
    m.build_support(std::move(graphs), m.edge_p_, {});
    return m;
}

NetworkModel NetworkModel::link_failure(Graph base, std::vector<double> edge_probability) {
    if (base.n() < 2) throw InvalidInput("link-failure model needs at least 2 nodes");
    if (edge_probability.size() != base.num_edges())
        throw InvalidInput("link-failure model: one probability per edge required");
    for (double p : edge_probability)
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("link-failure model: probabilities must lie in [0, 1]");

    NetworkModel m;
    m.kind_ = ModelKind::LinkFailure;
    m.base_ = Graph(base.n(), base.edges());
    m.delta_ = 1.0 / static_cast<double>(base.n());
    m.edge_p_ = std::move(edge_probability);
    // Metropolis entries are >= 1/n on every subgraph; the densest one is the base graph.
    if (!matrix_violations(metropolis_weights(m.base_).dense(), m.delta_).empty())
        throw InvalidInput("link-failure model: Metropolis weights violate delta = 1/n");
    return m;
}

NetworkModel NetworkModel::d_adjacent(Graph base, std::vector<double> node_probability) {
    const std::size_t n = base.n();
    if (n < 2) throw InvalidInput("d-adjacent model needs at least 2 nodes");
    const auto deg = base.degrees();
    if (deg.front() == 0 || std::any_of(deg.begin(), deg.end(), [&](std::size_t d) { return d != deg.front(); }))
        throw InvalidInput("d-adjacent model needs a d-regular base graph with d >= 1");
    if (node_probability.empty()) node_probability.assign(n, 1.0 / static_cast<double>(n));
    if (node_probability.size() != n) throw InvalidInput("d-adjacent model: one probability per node required");
    require_distribution(node_probability, "d-adjacent model");

    NetworkModel m;
    m.kind_ = ModelKind::DAdjacent;
    m.base_ = Graph(n, base.edges());
    m.delta_ = 1.0 / static_cast<double>(n);
    m.node_p_ = std::move(node_probability);

    // Distinct neighbourhood graphs in node order; d = 1 makes matched nodes coincide.
    std::vector<Graph> graphs;
    std::vector<double> probs;
    std::vector<SparseWeights> weights;
    for (NodeId i = 0; i < n; ++i) {
        std::vector<Edge> star;
        for (const Edge& e : m.base_.edges())
            if (e.u == i || e.v == i) star.push_back(e);
        Graph g(n, std::move(star));
        auto it = std::find(graphs.begin(), graphs.end(), g);
        if (it != graphs.end()) {
            probs[static_cast<std::size_t>(it - graphs.begin())] += m.node_p_[i];
            continue;
        }
        weights.push_back(metropolis_weights(g));
        graphs.push_back(std::move(g));
        probs.push_back(m.node_p_[i]);
    }
    m.build_support(std::move(graphs), std::move(probs), std::move(weights));
    return m;
}

NetworkModel NetworkModel::explicit_model(std::size_t n, std::vector<Realization> realizations,
                                          std::optional<double> delta) {
    if (n < 2) throw InvalidInput("explicit model needs at least 2 nodes");
    if (realizations.empty()) throw InvalidInput("explicit model needs at least one realization");
    std::vector<double> probs;
    std::vector<Graph> graphs;
    for (const auto& r : realizations) {
        if (r.graph.n() != n) throw InvalidInput("explicit model: realization has the wrong node count");
        if (std::find(graphs.begin(), graphs.end(), r.graph) != graphs.end())
            throw InvalidInput("explicit model: duplicate realization graph");
        graphs.push_back(Graph(n, r.graph.edges()));
        probs.push_back(r.probability);
    }
    require_distribution(probs, "explicit model");

    std::vector<SparseWeights> weights;
    double min_positive = 1.0;
    for (std::size_t k = 0; k < realizations.size(); ++k) {
        const auto& r = realizations[k];
        SparseWeights w;
        if (r.matrix) {
            const Eigen::MatrixXd& mat = *r.matrix;
            if (mat.rows() != static_cast<Eigen::Index>(n) || mat.cols() != static_cast<Eigen::Index>(n))
                throw InvalidInput("explicit model: matrix has the wrong size");
            w.diagonal.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                w.diagonal[i] = mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double v = mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                    if (v > 0.0) {
                        w.edges.push_back({i, j});
                        w.weights.push_back(v);
                    }
                }
            if (Graph(n, w.edges) != graphs[k])
                throw InvalidInput("explicit model: matrix sparsity does not match its graph");
        } else {
            w = metropolis_weights(graphs[k]);
        }
        const Eigen::MatrixXd dense = w.dense();
        for (Eigen::Index i = 0; i < dense.rows(); ++i)
            for (Eigen::Index j = 0; j < dense.cols(); ++j)
                if (dense(i, j) > 0.0) min_positive = std::min(min_positive, dense(i, j));
        weights.push_back(std::move(w));
    }
    const double d = delta.value_or(std::min(min_positive, 0.5));
    for (const auto& w : weights) {
        const auto problems = matrix_violations(w.dense(), d);
        if (!problems.empty()) throw InvalidInput("explicit model: " + problems.front());
    }

    NetworkModel m;
    m.kind_ = ModelKind::Explicit;
    m.base_ = supergraph(graphs, n);
    m.delta_ = d;
    m.explicit_ = std::move(realizations);
    m.build_support(std::move(graphs), std::move(probs), std::move(weights));
    return m;
}

std::size_t NetworkModel::pick(double u) const {
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) {
        // rounding left u above the final partial sum: take the last positive entry
        std::size_t k = support_p_.size();
        while (k > 0 && support_p_[k - 1] <= 0.0) --k;
        return k - 1;
    }
    return static_cast<std::size_t>(it - cumulative_.begin());
}

void NetworkModel::require_mask_capacity() const {
    if (base_.num_edges() > 64) throw CapacityError("edge-mask operations need a base graph with <= 64 edges", 64);
}

std::uint64_t NetworkModel::mask_of(const Graph& g) const {
    require_mask_capacity();
    if (g.n() != base_.n()) throw InvalidInput("graph has the wrong node count for this model");
    std::uint64_t mask = 0;
    for (const Edge& e : g.edges()) {
        auto idx = base_.edge_index(e.u, e.v);
        if (!idx) throw InvalidInput("graph edge is not in the model's base graph");
        mask |= std::uint64_t{1} << *idx;
    }
    return mask;
}

std::uint64_t NetworkModel::sample_edge_mask(Rng& rng) const {
    require_mask_capacity();
    if (kind_ == ModelKind::LinkFailure) {
        std::uint64_t mask = 0;
        for (std::size_t e = 0; e < edge_p_.size(); ++e)
            if (uniform01(rng) < edge_p_[e]) mask |= std::uint64_t{1} << e;
        return mask;
    }
    return support_masks_[pick(uniform01(rng))];
}

Graph NetworkModel::sample_graph(Rng& rng) const {
    if (base_.num_edges() <= 64) return base_.subgraph(sample_edge_mask(rng));
    if (kind_ == ModelKind::LinkFailure) {
        std::vector<Edge> kept;
        for (std::size_t e = 0; e < edge_p_.size(); ++e)
            if (uniform01(rng) < edge_p_[e]) kept.push_back(base_.edge(e));
        return Graph(base_.n(), std::move(kept));
    }
    return support_[pick(uniform01(rng))];
}

namespace {

double draw_alpha(const GossipAlpha& alpha, double delta, Rng& rng) {
    if (!alpha.uniform_draw) return alpha.fixed;
    return delta + (1.0 - 2.0 * delta) * uniform01(rng);
}

}  // namespace

void NetworkModel::weights_for_mask(std::uint64_t mask, Rng& rng, SparseWeights& out) const {
    require_mask_capacity();
    const std::size_t n = base_.n();
    switch (kind_) {
        case ModelKind::Gossip: {
            if (std::popcount(mask) != 1) throw InvalidInput("gossip realization must have exactly one edge");
            const Edge& e = base_.edge(static_cast<std::size_t>(std::countr_zero(mask)));
            const double a = draw_alpha(alpha_, delta_, rng);
            out.diagonal.assign(n, 1.0);
            out.diagonal[e.u] = 1.0 - a;
            out.diagonal[e.v] = 1.0 - a;
            out.edges.assign(1, e);
            out.weights.assign(1, a);
            return;
        }
        case ModelKind::LinkFailure: {
            if (base_.num_edges() < 64 && (mask >> base_.num_edges()) != 0)
                throw InvalidInput("mask has bits outside the base graph");
            out.edges.clear();
            for (std::uint64_t m = mask; m != 0; m &= m - 1)
                out.edges.push_back(base_.edge(static_cast<std::size_t>(std::countr_zero(m))));
            const std::vector<Edge> edges = out.edges;
            metropolis_into(n, edges, out);
            return;
        }
        case ModelKind::DAdjacent:
        case ModelKind::Explicit: {
            auto it = std::find(support_masks_.begin(), support_masks_.end(), mask);
            if (it == support_masks_.end()) throw InvalidInput("edge mask is not a realizable graph of this model");
            out = support_weights_[static_cast<std::size_t>(it - support_masks_.begin())];
            return;
        }
    }
}

SparseWeights NetworkModel::weights_for_mask(std::uint64_t mask, Rng& rng) const {
    SparseWeights w;
    weights_for_mask(mask, rng, w);
    return w;
}

std::optional<std::size_t> NetworkModel::find_support(const Graph& g) const {
    if (g.n() != base_.n()) return std::nullopt;
    for (std::size_t k = 0; k < support_.size(); ++k)
        if (support_[k] == g) return k;
    return std::nullopt;
}

StochasticMatrix NetworkModel::sample_matrix(const Graph& g, Rng& rng) const {
    if (g.n() != base_.n()) throw InvalidInput("graph has the wrong node count for this model");
    SparseWeights w;
    switch (kind_) {
        case ModelKind::Gossip: {
            if (g.num_edges() != 1 || !base_.has_edge(g.edge(0).u, g.edge(0).v))
                throw InvalidInput("graph is not a realizable gossip graph");
            const Edge& e = g.edge(0);
            const double a = draw_alpha(alpha_, delta_, rng);
            w.diagonal.assign(g.n(), 1.0);
            w.diagonal[e.u] = 1.0 - a;
            w.diagonal[e.v] = 1.0 - a;
            w.edges = {e};
            w.weights = {a};
            break;
        }
        case ModelKind::LinkFailure:
            for (const Edge& e : g.edges())
                if (!base_.has_edge(e.u, e.v)) throw InvalidInput("graph is not a subgraph of the base graph");
            w = metropolis_weights(g);
            break;
        case ModelKind::DAdjacent:
        case ModelKind::Explicit: {
            auto k = find_support(g);
            if (!k) throw InvalidInput("graph is not a realizable graph of this model");
            w = support_weights_[*k];
            break;
        }
    }
    return StochasticMatrix::validate(w.dense(), delta_);
}

std::size_t NetworkModel::realizable_count(std::size_t cap) const {
    if (kind_ == ModelKind::LinkFailure) {
        if (base_.num_edges() > std::min<std::size_t>(cap, 62))
            throw CapacityError("link-failure enumeration over 2^" + std::to_string(base_.num_edges()) + " subgraphs",
                                cap);
        return std::size_t{1} << base_.num_edges();
    }
    return support_.size();
}

std::vector<Graph> NetworkModel::realizable_graphs(std::size_t cap) const {
    if (kind_ != ModelKind::LinkFailure) return support_;
    const std::size_t count = realizable_count(cap);
    std::vector<Graph> out;
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) out.push_back(base_.subgraph(mask));
    return out;
}

double NetworkModel::graph_probability(const Graph& g) const {
    if (g.n() != base_.n()) return 0.0;
    if (kind_ == ModelKind::LinkFailure) {
        std::vector<char> present(base_.num_edges(), 0);
        for (const Edge& e : g.edges()) {
            auto idx = base_.edge_index(e.u, e.v);
            if (!idx) return 0.0;
            present[*idx] = 1;
        }
        double p = 1.0;
        for (std::size_t e = 0; e < present.size(); ++e) p *= present[e] ? edge_p_[e] : 1.0 - edge_p_[e];
        return p;
    }
    auto k = find_support(g);
    return k ? support_p_[*k] : 0.0;
}

std::vector<std::pair<std::uint64_t, double>> NetworkModel::finite_support() const {
    if (kind_ == ModelKind::LinkFailure)
        throw InvalidInput("link-failure models have no finite listed support; use realizable_graphs()");
    require_mask_capacity();
    std::vector<std::pair<std::uint64_t, double>> out;
    for (std::size_t k = 0; k < support_.size(); ++k) out.emplace_back(support_masks_[k], support_p_[k]);
    return out;
}

}  // namespace consrate
