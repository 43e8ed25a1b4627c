#pragma once

#include <string>

#include "consrate/model_config.hpp"
#include "consrate/models.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(CONSRATE_TEST_DATA_DIR) + "/" + name; }

/// Five nodes, three realizations: G1 = {0-1, 2-3}, G2 = {1-2, 0-4}, G3 = {0-1, 3-4}.
/// Maximal disconnected collections are {G2} and {G1, G3}.
inline consrate::NetworkModel toy_model(double p1 = 1.0 / 3, double p2 = 1.0 / 3, double p3 = -1.0) {
    using consrate::Graph;
    if (p3 < 0.0) p3 = 1.0 - p1 - p2;
    std::vector<consrate::Realization> r{
        {Graph(5, {{0, 1}, {2, 3}}), p1, std::nullopt},
        {Graph(5, {{1, 2}, {0, 4}}), p2, std::nullopt},
        {Graph(5, {{0, 1}, {3, 4}}), p3, std::nullopt},
    };
    return consrate::NetworkModel::explicit_model(5, std::move(r));
}

inline consrate::NetworkModel k4_gossip() {
    return consrate::NetworkModel::gossip(consrate::complete_graph(4), std::vector<double>(6, 1.0 / 6.0));
}

}  // namespace fixtures
