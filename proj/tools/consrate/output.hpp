#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "consrate/collections.hpp"
#include "consrate/mincut.hpp"
#include "manifest.hpp"

namespace consrate::cli {

/// Writes `text` to `path`, or to stdout when `path` is empty.
void emit(const std::string& path, const std::string& text);

/// Result object plus "manifest" and "manifest_hash", pretty-printed.
std::string json_document(nlohmann::json result, const RunManifest& manifest);

/// CSV with two leading comment lines carrying the manifest hash and manifest.
std::string csv_document(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                         const RunManifest& manifest);

/// Also writes "<path>.manifest.json" next to a file output.
void write_manifest_sidecar(const std::string& path, const RunManifest& manifest);

/// Shortest round-trip decimal form; "inf" / "nan" for non-finite values.
std::string num(double v);

/// Finite doubles as numbers, infinities as null.
nlohmann::json json_number(double v);

nlohmann::json cut_json(const CutResult& cut);
nlohmann::json collection_json(const Collection& c);
nlohmann::json rate_json(const RateResult& r, bool bits);

}  // namespace consrate::cli
