#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "consrate/graph.hpp"
#include "consrate/rng.hpp"

namespace consrate {

/// Dense symmetric doubly stochastic matrix whose positive entries and diagonal are
/// all >= delta. Only constructible through validate().
class StochasticMatrix {
public:
    /// Throws InvalidInput listing the first violation.
    static StochasticMatrix validate(Eigen::MatrixXd values, double delta);

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    double delta() const noexcept { return delta_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }

    /// Graph with an edge wherever an off-diagonal entry is positive.
    Graph induced_graph() const;

private:
    StochasticMatrix(Eigen::MatrixXd values, double delta) : values_(std::move(values)), delta_(delta) {}

    Eigen::MatrixXd values_;
    double delta_;
};

/// Human-readable list of violated matrix conditions (empty when valid).
std::vector<std::string> matrix_violations(const Eigen::MatrixXd& w, double delta);

/// Symmetric weights in sparse form: the diagonal plus one weight per active edge.
struct SparseWeights {
    std::vector<double> diagonal;
    std::vector<Edge> edges;
    std::vector<double> weights;

    Eigen::MatrixXd dense() const;
};

/// Metropolis weights: W_ij = 1/(1 + max(d_i, d_j)) on edges, W_ii = 1 - sum_j W_ij.
SparseWeights metropolis_weights(const Graph& g);

enum class ModelKind { Gossip, LinkFailure, DAdjacent, Explicit };

std::string to_string(ModelKind kind);

/// One listed outcome of an explicit model.
struct Realization {
    Graph graph;
    double probability = 0.0;
    /// Averaging matrix; Metropolis weights on `graph` when absent.
    std::optional<Eigen::MatrixXd> matrix;
};

/// How gossip picks the averaging weight alpha for the active edge.
struct GossipAlpha {
    double fixed = 0.5;
    /// Draw alpha uniformly on [delta, 1 - delta] instead of using `fixed`.
    bool uniform_draw = false;
};

/// An i.i.d. distribution over (graph, averaging matrix) realizations.
///
/// Every realization's edges are a subset of base_graph(), so a realization is also
/// an edge mask over base_graph() when it has at most 64 edges.
class NetworkModel {
public:
    static NetworkModel gossip(Graph base, std::vector<double> edge_probability, GossipAlpha alpha = {},
                               double delta = 0.1);
    static NetworkModel link_failure(Graph base, std::vector<double> edge_probability);
    /// `node_probability` empty means uniform 1/N.
    static NetworkModel d_adjacent(Graph base, std::vector<double> node_probability = {});
    /// `delta` absent means the smallest positive entry over all listed matrices.
    static NetworkModel explicit_model(std::size_t n, std::vector<Realization> realizations,
                                       std::optional<double> delta = std::nullopt);

    ModelKind kind() const noexcept { return kind_; }
    std::size_t n() const noexcept { return base_.n(); }
    double delta() const noexcept { return delta_; }
    const Graph& base_graph() const noexcept { return base_; }
    /// Gossip / link-failure per-edge probabilities (aligned with base_graph().edges()).
    const std::vector<double>& edge_probabilities() const noexcept { return edge_p_; }
    /// d-adjacent activation probabilities per node.
    const std::vector<double>& node_probabilities() const noexcept { return node_p_; }
    const std::vector<Realization>& realizations() const noexcept { return explicit_; }
    const GossipAlpha& alpha() const noexcept { return alpha_; }

    Graph sample_graph(Rng& rng) const;
    /// Averaging matrix for realized graph `g`; InvalidInput if `g` is not realizable.
    StochasticMatrix sample_matrix(const Graph& g, Rng& rng) const;

    /// Realizable graphs in deterministic order. Link failure enumerates all 2^|E|
    /// subgraphs (subgraph index == edge mask), subject to `cap` on |E|.
    std::vector<Graph> realizable_graphs(std::size_t cap = 20) const;
    /// Number of realizable graphs without materialising them (2^|E| for link failure).
    std::size_t realizable_count(std::size_t cap = 20) const;

    /// Exact probability that sample_graph returns `g` (0 when unrealizable).
    double graph_probability(const Graph& g) const;

    // Edge-mask fast paths (base graph with at most 64 edges).

    /// Realized edge set as a mask over base_graph().edges().
    std::uint64_t sample_edge_mask(Rng& rng) const;
    /// Averaging weights for a realized mask (alpha is drawn from `rng` if configured).
    SparseWeights weights_for_mask(std::uint64_t mask, Rng& rng) const;
    /// Same, reusing the storage of `out`.
    void weights_for_mask(std::uint64_t mask, Rng& rng, SparseWeights& out) const;
    /// For finite-support models: (mask, probability) per realizable graph, in
    /// realizable_graphs() order. Not available for link failure.
    std::vector<std::pair<std::uint64_t, double>> finite_support() const;
    std::uint64_t mask_of(const Graph& g) const;

private:
    NetworkModel() = default;
    void require_mask_capacity() const;
    void build_support(std::vector<Graph> graphs, std::vector<double> probs, std::vector<SparseWeights> weights);
    std::optional<std::size_t> find_support(const Graph& g) const;
    std::size_t pick(double u) const;

    ModelKind kind_ = ModelKind::Explicit;
    Graph base_;
    double delta_ = 0.0;
    std::vector<double> edge_p_;
    std::vector<double> node_p_;
    std::vector<Realization> explicit_;
    GossipAlpha alpha_;

    // Finite support (gossip, d-adjacent, explicit), in realizable_graphs() order.
    std::vector<Graph> support_;
    std::vector<double> support_p_;
    std::vector<double> cumulative_;
    std::vector<SparseWeights> support_weights_;  // empty for gossip (alpha-dependent)
    std::vector<std::uint64_t> support_masks_;     // filled when base has <= 64 edges
};

}  // namespace consrate
