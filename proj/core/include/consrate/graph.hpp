#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace consrate {

using NodeId = std::size_t;

/// Undirected edge stored canonically with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Canonical edge {a, b}; throws InvalidInput on a self-loop.
Edge make_edge(NodeId a, NodeId b);

/// Undirected simple graph on nodes [0, n) with optional per-edge scalar attributes.
///
/// Edges are kept sorted lexicographically, so iteration order and edge indices are
/// deterministic. Immutable after construction.
class Graph {
public:
    explicit Graph(std::size_t n = 0);
    Graph(std::size_t n, std::vector<Edge> edges);
    /// Edges with an attribute per edge (nullopt where absent).
    Graph(std::size_t n, std::vector<Edge> edges, std::vector<std::optional<double>> attrs);

    std::size_t n() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t index) const { return edges_.at(index); }

    bool has_edge(NodeId a, NodeId b) const;
    /// Position of {a, b} in edges(), if present.
    std::optional<std::size_t> edge_index(NodeId a, NodeId b) const;

    std::optional<double> attribute(std::size_t edge_index) const;
    /// True when every edge carries an attribute.
    bool fully_attributed() const;
    /// Attribute vector aligned with edges(); throws InvalidInput if any edge lacks one.
    std::vector<double> attributes() const;
    /// Same graph, attributes replaced (size must match num_edges()).
    Graph with_attributes(std::span<const double> values) const;

    std::vector<std::size_t> degrees() const;
    std::size_t degree(NodeId i) const;

    /// Edges in one sorted list; for graphs with <= 64 edges a subset of them is an EdgeMask.
    Graph subgraph(std::uint64_t edge_mask) const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<std::optional<double>> attrs_;
};

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n);

    std::size_t find(std::size_t x);
    bool unite(std::size_t a, std::size_t b);
    std::size_t components() const noexcept { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t components_;
};

bool is_connected(const Graph& g);
/// Components as sorted node lists, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

/// Connectivity of edge subsets of a fixed base graph (n <= 64, at most 64 edges),
/// with a precomputed table when the base has at most 20 edges.
class MaskConnectivity {
public:
    explicit MaskConnectivity(const Graph& base);

    bool connected(std::uint64_t mask) const;

private:
    bool search(std::uint64_t mask) const;

    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<std::uint8_t> table_;
};

/// Unweighted Laplacian: degree on the diagonal, -1 per edge.
Eigen::MatrixXd laplacian(const Graph& g);

/// Eigenvalues of a symmetric matrix in ascending order.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a);

/// Second-smallest Laplacian eigenvalue (algebraic connectivity). Values within
/// kSpectralZero of zero are reported as exactly 0.
double fiedler_value(const Graph& g);

/// 2(1 - cos(pi/n)): the Fiedler value of the n-node path, the minimum over all
/// connected graphs on n nodes.
double path_fiedler_constant(std::size_t n);

inline constexpr double kSpectralZero = 1e-9;

/// Union of the edge sets of `graphs`, all on `n` nodes. Attributes are dropped.
Graph supergraph(std::span<const Graph> graphs, std::size_t n);

// Builders.
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
/// Star with centre 0.
Graph star_graph(std::size_t n);
/// d-regular circulant graph (requires n*d even, 1 <= d <= n-1).
Graph circulant_graph(std::size_t n, std::size_t d);

/// Text format: `n <N>` header, then `<i> <j> [attr]` per edge, `#` starts a comment.
Graph parse_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

}  // namespace consrate
