#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "consrate/models.hpp"

namespace consrate {

/// Builds a NetworkModel from a JSON config object. Relative graph paths resolve
/// against `base_dir`. Unknown keys are rejected.
///
/// Keys by type:
///   gossip:       graph, p ("uniform" | {"i-j": p}), alpha (number | "uniform"), delta
///   link_failure: graph, p (number | {"i-j": p})
///   d_adjacent:   graph, p ("uniform" | {"i": q})
///   explicit:     n, realizations [{edges: [[i,j],...], p, matrix?}], delta
/// When `p` is omitted the graph file's edge attributes are used, falling back to
/// uniform for gossip and d-adjacent.
NetworkModel model_from_json(const nlohmann::json& config, const std::filesystem::path& base_dir = {});

NetworkModel load_model_file(const std::filesystem::path& path);

}  // namespace consrate
