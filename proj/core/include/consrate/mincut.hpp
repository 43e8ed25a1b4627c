#pragma once

#include <span>
#include <vector>

#include "consrate/graph.hpp"

namespace consrate {

/// A global cut (S, V \ S) with its total crossing cost.
struct CutResult {
    double value = 0.0;
    /// S, sorted; nonempty proper subset of the nodes, always containing node 0.
    std::vector<NodeId> side;
    /// V \ S, sorted.
    std::vector<NodeId> other;
    /// Edges of the input graph crossing the partition, in graph order.
    std::vector<Edge> cut_edges;
};

/// Global minimum cut by Stoer-Wagner with O(n) maximum-adjacency selection
/// (O(n^3) overall). `costs` is aligned with g.edges(); +inf marks an edge that can
/// never be cut, and such edges are contracted up front. A disconnected graph gives
/// value 0 with the component of node 0 as S. Among equal-value cuts, the first
/// phase reaching the minimum wins.
CutResult stoer_wagner(const Graph& g, std::span<const double> costs);

/// Minimum over all 2^(n-1) - 1 bipartitions; testing oracle for n <= 16.
CutResult exhaustive_mincut(const Graph& g, std::span<const double> costs);

/// Total cost of edges crossing (side, rest).
double cut_value(const Graph& g, std::span<const double> costs, std::span<const NodeId> side);

}  // namespace consrate
