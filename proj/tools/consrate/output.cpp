#include "output.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include <fmt/format.h>

#include "consrate/error.hpp"
#include "consrate/graph.hpp"

namespace consrate::cli {

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write output file: " + path);
    out << text;
}

std::string json_document(nlohmann::json result, const RunManifest& manifest) {
    result["manifest_hash"] = manifest.hash();
    result["manifest"] = manifest.to_json();
    return result.dump(2) + "\n";
}

std::string csv_document(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                         const RunManifest& manifest) {
    std::string out = "# manifest-hash: " + manifest.hash() + "\n";
    out += "# manifest: " + manifest.to_json().dump() + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

void write_manifest_sidecar(const std::string& path, const RunManifest& manifest) {
    if (path.empty()) return;
    nlohmann::json j = manifest.to_json();
    j["manifest_hash"] = manifest.hash();
    emit(path + ".manifest.json", j.dump(2) + "\n");
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::json cut_json(const CutResult& cut) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : cut.cut_edges) edges.push_back({e.u, e.v});
    return {{"value", json_number(cut.value)}, {"side", cut.side}, {"other", cut.other}, {"cut_edges", edges}};
}

nlohmann::json collection_json(const Collection& c) {
    return {{"members", c.members}, {"p", c.mass}, {"supergraph_components", connected_components(c.supergraph)}};
}

nlohmann::json rate_json(const RateResult& r, bool bits) {
    const double scale = bits ? 1.0 / std::numbers::ln2 : 1.0;
    nlohmann::json j;
    j["method"] = to_string(r.method);
    j["units"] = bits ? "bits" : "nats";
    j["rate"] = json_number(r.rate * scale);
    j["rate_infinite"] = std::isinf(r.rate);
    j["p_max"] = r.p_max;
    j["witness_partition"] = r.cut ? cut_json(*r.cut) : nlohmann::json(nullptr);
    j["witness_collection"] = r.collection ? collection_json(*r.collection) : nlohmann::json(nullptr);
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace consrate::cli
