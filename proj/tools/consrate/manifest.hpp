#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace consrate::cli {

/// Everything needed to rerun a command and get byte-identical output.
/// Thread count is deliberately absent: results do not depend on it.
struct RunManifest {
    std::string subcommand;
    nlohmann::json config = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
    /// Input path -> FNV-1a hash of its bytes.
    nlohmann::json inputs = nlohmann::json::object();

    void add_input(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    /// 16 hex digits, FNV-1a 64 over the compact JSON form.
    std::string hash() const;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace consrate::cli
