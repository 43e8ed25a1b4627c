#include "manifest.hpp"

#include <fstream>
#include <sstream>

#include "consrate/error.hpp"

namespace consrate::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    return s;
}

void RunManifest::add_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open input file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    inputs[path.string()] = hex64(fnv1a64(buf.str()));
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["tool"] = "consrate";
    j["tool_version"] = CONSRATE_VERSION;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    return j;
}

std::string RunManifest::hash() const { return hex64(fnv1a64(to_json().dump())); }

}  // namespace consrate::cli
