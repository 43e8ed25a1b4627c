#include "consrate/model_config.hpp"

#include <fstream>
#include <set>

#include "consrate/error.hpp"

namespace consrate {

namespace {

using nlohmann::json;

void reject_unknown(const json& config, const std::set<std::string>& allowed, const std::string& type) {
    for (const auto& [key, _] : config.items())
        if (!allowed.contains(key)) throw InvalidInput("model config (" + type + "): unknown key '" + key + "'");
}

Graph load_graph(const json& config, const std::filesystem::path& base_dir) {
    if (!config.contains("graph") || !config["graph"].is_string())
        throw InvalidInput("model config: 'graph' must be a path string");
    std::filesystem::path p = config["graph"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return read_graph_file(p.string());
}

Edge parse_edge_key(const std::string& key, const Graph& g) {
    const auto dash = key.find('-');
    if (dash == std::string::npos) throw InvalidInput("model config: edge key '" + key + "' must look like 'i-j'");
    try {
        const NodeId a = std::stoul(key.substr(0, dash));
        const NodeId b = std::stoul(key.substr(dash + 1));
        if (!g.has_edge(a, b)) throw InvalidInput("model config: edge '" + key + "' is not in the graph");
        return make_edge(a, b);
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const InvalidInput*>(&e)) throw;
        throw InvalidInput("model config: bad edge key '" + key + "'");
    }
}

std::vector<double> per_edge(const json& p, const Graph& g) {
    std::vector<double> out(g.num_edges(), -1.0);
    for (const auto& [key, value] : p.items()) {
        if (!value.is_number()) throw InvalidInput("model config: edge probability must be a number");
        const Edge e = parse_edge_key(key, g);
        out[*g.edge_index(e.u, e.v)] = value.get<double>();
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] < 0.0)
            throw InvalidInput("model config: no probability for edge " + std::to_string(g.edge(i).u) + "-" +
                               std::to_string(g.edge(i).v));
    return out;
}

std::vector<double> edge_probabilities(const json& config, const Graph& g, bool allow_uniform, bool allow_scalar) {
    if (!config.contains("p")) {
        if (g.fully_attributed() && g.num_edges() > 0) return g.attributes();
        if (allow_uniform) return std::vector<double>(g.num_edges(), 1.0 / static_cast<double>(g.num_edges()));
        throw InvalidInput("model config: 'p' missing and graph edges carry no probabilities");
    }
    const json& p = config["p"];
    if (p.is_string()) {
        if (p.get<std::string>() != "uniform" || !allow_uniform)
            throw InvalidInput("model config: unsupported 'p' value");
        return std::vector<double>(g.num_edges(), 1.0 / static_cast<double>(g.num_edges()));
    }
    if (p.is_number()) {
        if (!allow_scalar) throw InvalidInput("model config: scalar 'p' only applies to link_failure");
        return std::vector<double>(g.num_edges(), p.get<double>());
    }
    if (p.is_object()) return per_edge(p, g);
    throw InvalidInput("model config: 'p' has an unsupported type");
}

NetworkModel gossip_from(const json& config, const std::filesystem::path& base_dir) {
    reject_unknown(config, {"type", "graph", "p", "alpha", "delta"}, "gossip");
    Graph g = load_graph(config, base_dir);
    auto p = edge_probabilities(config, g, true, false);
    GossipAlpha alpha;
    if (config.contains("alpha")) {
        const json& a = config["alpha"];
        if (a.is_string() && a.get<std::string>() == "uniform") alpha.uniform_draw = true;
        else if (a.is_number()) alpha.fixed = a.get<double>();
        else throw InvalidInput("model config: 'alpha' must be a number or \"uniform\"");
    }
    const double delta = config.value("delta", 0.1);
    return NetworkModel::gossip(std::move(g), std::move(p), alpha, delta);
}

NetworkModel link_failure_from(const json& config, const std::filesystem::path& base_dir) {
    reject_unknown(config, {"type", "graph", "p"}, "link_failure");
    Graph g = load_graph(config, base_dir);
    auto p = edge_probabilities(config, g, false, true);
    return NetworkModel::link_failure(std::move(g), std::move(p));
}

NetworkModel d_adjacent_from(const json& config, const std::filesystem::path& base_dir) {
    reject_unknown(config, {"type", "graph", "p"}, "d_adjacent");
    Graph g = load_graph(config, base_dir);
    std::vector<double> q;
    if (config.contains("p")) {
        const json& p = config["p"];
        if (p.is_string() && p.get<std::string>() == "uniform") {
            // default
        } else if (p.is_object()) {
            q.assign(g.n(), -1.0);
            for (const auto& [key, value] : p.items()) {
                std::size_t node = 0;
                try {
                    node = std::stoul(key);
                } catch (const std::logic_error&) {
                    throw InvalidInput("model config: bad node key '" + key + "'");
                }
                if (node >= g.n() || !value.is_number()) throw InvalidInput("model config: bad node entry '" + key + "'");
                q[node] = value.get<double>();
            }
            for (double v : q)
                if (v < 0.0) throw InvalidInput("model config: d_adjacent 'p' must list every node");
        } else {
            throw InvalidInput("model config: d_adjacent 'p' must be \"uniform\" or {\"i\": q}");
        }
    }
    return NetworkModel::d_adjacent(std::move(g), std::move(q));
}

NetworkModel explicit_from(const json& config) {
    reject_unknown(config, {"type", "n", "realizations", "delta"}, "explicit");
    if (!config.contains("n") || !config["n"].is_number_unsigned())
        throw InvalidInput("model config: explicit model needs integer 'n'");
    const auto n = config["n"].get<std::size_t>();
    if (!config.contains("realizations") || !config["realizations"].is_array())
        throw InvalidInput("model config: explicit model needs a 'realizations' array");
    std::vector<Realization> list;
    for (const json& r : config["realizations"]) {
        reject_unknown(r, {"edges", "p", "matrix"}, "explicit realization");
        if (!r.contains("edges") || !r.contains("p")) throw InvalidInput("model config: realization needs 'edges' and 'p'");
        std::vector<Edge> edges;
        for (const json& e : r["edges"]) {
            if (!e.is_array() || e.size() != 2) throw InvalidInput("model config: edge must be [i, j]");
            edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>()});
        }
        Realization real{Graph(n, std::move(edges)), r["p"].get<double>(), std::nullopt};
        if (r.contains("matrix")) {
            const json& m = r["matrix"];
            if (!m.is_array() || m.size() != n) throw InvalidInput("model config: matrix must be n x n");
            Eigen::MatrixXd mat(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) {
                if (!m[i].is_array() || m[i].size() != n) throw InvalidInput("model config: matrix must be n x n");
                for (std::size_t j = 0; j < n; ++j)
                    mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j].get<double>();
            }
            real.matrix = std::move(mat);
        }
        list.push_back(std::move(real));
    }
    std::optional<double> delta;
    if (config.contains("delta")) delta = config["delta"].get<double>();
    return NetworkModel::explicit_model(n, std::move(list), delta);
}

}  // namespace

NetworkModel model_from_json(const json& config, const std::filesystem::path& base_dir) {
    if (!config.is_object() || !config.contains("type") || !config["type"].is_string())
        throw InvalidInput("model config: expected an object with a string 'type'");
    const auto type = config["type"].get<std::string>();
    try {
        if (type == "gossip") return gossip_from(config, base_dir);
        if (type == "link_failure") return link_failure_from(config, base_dir);
        if (type == "d_adjacent") return d_adjacent_from(config, base_dir);
        if (type == "explicit") return explicit_from(config);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("model config: ") + e.what());
    }
    throw InvalidInput("model config: unknown type '" + type + "'");
}

NetworkModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open model file: " + path.string());
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("model file " + path.string() + ": " + e.what());
    }
    return model_from_json(config, path.parent_path());
}

}  // namespace consrate
