#pragma once

#include <cstddef>
#include <span>

#include "consrate/collections.hpp"
#include "consrate/graph.hpp"
#include "consrate/models.hpp"

namespace consrate {

/// Gossip rate via min-cut: p_max = 1 - mincut(V, E, P).
/// Probabilities must sum to 1 within 1e-9. A disconnected g gives rate 0.
RateResult gossip_rate(const Graph& g, std::span<const double> p);

/// Link-failure rate via min-cut with costs -log(1 - p_e); p_e = 1 makes an edge
/// uncuttable. p_max = exp(-rate).
RateResult link_failure_rate(const Graph& g, std::span<const double> p);

/// Gossip on any d-regular graph with uniform p = 2/(n d): rate -log(1 - 2/n).
RateResult regular_gossip_rate(std::size_t n, std::size_t d);

/// Link failure on any d-regular graph with uniform p: rate -d log(1 - p).
RateResult regular_link_failure_rate(std::size_t n, std::size_t d, double p);

/// Best available exact route for a model: min-cut for gossip and link failure,
/// brute-force collection enumeration otherwise.
RateResult model_rate(const NetworkModel& model, std::size_t cap = kDefaultEnumerationCap);

}  // namespace consrate
