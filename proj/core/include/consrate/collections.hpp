#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "consrate/graph.hpp"
#include "consrate/mincut.hpp"
#include "consrate/models.hpp"

namespace consrate {

/// A set of realizable graphs, identified by index into realizable_graphs().
struct Collection {
    std::vector<std::size_t> members;  // ascending
    Graph supergraph;
    /// Probability that one draw lands in the collection.
    double mass = 0.0;
};

enum class RateMethod { Brute, MinCut, ClosedForm, Empirical };

std::string to_string(RateMethod method);

/// Exponential decay rate of the consensus error probability, in nats.
///
/// rate == -log(p_max); rate is +inf exactly when p_max == 0 (no disconnected
/// collection can occur).
struct RateResult {
    double rate = 0.0;
    double p_max = 1.0;
    RateMethod method = RateMethod::Brute;
    std::optional<Collection> collection;  // most likely maximal collection (brute)
    std::optional<CutResult> cut;          // minimising cut (min-cut routes)
    std::vector<std::string> warnings;

    bool finite() const;
};

/// Rate result for a given p_max, with rate = -log(p_max).
RateResult rate_from_p_max(double p_max, RateMethod method);

inline constexpr std::size_t kDefaultEnumerationCap = 20;

/// True iff the union of the members' edges is disconnected. The empty collection
/// counts as disconnected (edgeless supergraph).
bool is_disconnected_collection(const NetworkModel& model, std::span<const std::size_t> members,
                                std::size_t cap = kDefaultEnumerationCap);

/// All maximal disconnected collections: disconnected, and adding any other
/// realizable graph connects the union. Empty when every realization is connected.
///
/// Finite-support models enumerate subsets of the realizable graphs (|G| <= cap).
/// Link-failure models use the subgraph correspondence: maximal collections are
/// exactly "all subgraphs of E \ F" for F the edge boundary of a node set S with
/// both S and V \ S inducing connected subgraphs (|E| <= cap).
std::vector<Collection> enumerate_maximal_collections(const NetworkModel& model,
                                                      std::size_t cap = kDefaultEnumerationCap);

/// All nonempty disconnected collections (finite-support models only).
std::vector<Collection> enumerate_disconnected_collections(const NetworkModel& model,
                                                           std::size_t cap = kDefaultEnumerationCap);

/// p_max as the largest mass over maximal collections; witness is the first
/// maximising collection in enumeration order.
RateResult p_max_brute(const NetworkModel& model, std::size_t cap = kDefaultEnumerationCap);

/// Largest mass over all nonempty disconnected collections (0 if there are none).
/// For link failure, the maximum over disconnecting edge sets F of prod_{e in F}(1 - p_e).
double p_max_over_all_disconnected(const NetworkModel& model, std::size_t cap = kDefaultEnumerationCap);

}  // namespace consrate
