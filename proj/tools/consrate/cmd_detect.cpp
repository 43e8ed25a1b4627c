#include <filesystem>
#include <fstream>
#include <memory>
#include <set>

#include "commands.hpp"
#include "consrate/detect.hpp"
#include "consrate/error.hpp"
#include "consrate/power_alloc.hpp"
#include "output.hpp"

namespace consrate::cli {

namespace {

using nlohmann::json;

struct DetectOptions {
    std::string config;
    std::string power_file;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    double level = 0.1;
    std::string output;
    std::string summary;
};

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(std::string("detect config: bad value for '") + key + "'");
    }
}

Graph load_topology(const json& cfg, const std::filesystem::path& base_dir, RunManifest& man) {
    if (!cfg.contains("topology")) throw InvalidInput("detect config: 'topology' is required");
    const json& t = cfg["topology"];
    if (t.is_string()) {
        std::filesystem::path p = t.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        man.add_input(p);
        return read_graph_file(p.string());
    }
    if (!t.is_object() || get_or<std::string>(t, "generator", "") != "geometric")
        throw InvalidInput("detect config: topology must be a path or {\"generator\": \"geometric\", ...}");
    for (const auto& [key, _] : t.items())
        if (key != "generator" && key != "n" && key != "edges" && key != "seed")
            throw InvalidInput("detect config: unknown topology key '" + key + "'");
    return random_geometric_network(get_or<std::size_t>(t, "n", 14), get_or<std::size_t>(t, "edges", 38),
                                    get_or<std::uint64_t>(t, "seed", 1))
        .graph;
}

std::vector<double> probabilities_from_power_file(const std::string& path, const Graph& g) {
    const json alloc = read_json(path);
    if (!alloc.contains("edges") || !alloc["edges"].is_array()) throw InvalidInput(path + ": missing 'edges' array");
    std::vector<double> p(g.num_edges(), -1.0);
    for (const auto& e : alloc["edges"]) {
        const auto i = e.at("i").get<NodeId>();
        const auto j = e.at("j").get<NodeId>();
        const auto idx = g.edge_index(i, j);
        if (!idx) throw InvalidInput(path + ": edge " + std::to_string(i) + "-" + std::to_string(j) + " not in topology");
        p[*idx] = e.at("P_ij").get<double>();
    }
    for (double v : p)
        if (v < 0.0) throw InvalidInput(path + ": allocation does not cover every topology edge");
    return p;
}

std::vector<double> link_probabilities(const json& cfg, const Graph& g) {
    if (!cfg.contains("links")) {
        if (!g.fully_attributed()) throw InvalidInput("detect config: no 'links' and the topology has no edge probabilities");
        return g.attributes();
    }
    const json& l = cfg["links"];
    for (const auto& [key, _] : l.items())
        if (key != "p" && key != "power" && key != "k_scale" && key != "alpha")
            throw InvalidInput("detect config: unknown links key '" + key + "'");
    if (l.contains("p")) {
        if (l["p"].is_number()) return std::vector<double>(g.num_edges(), l["p"].get<double>());
        std::vector<double> p(g.num_edges(), -1.0);
        for (const auto& [key, value] : l["p"].items()) {
            const auto dash = key.find('-');
            if (dash == std::string::npos) throw InvalidInput("detect config: edge key '" + key + "' must look like 'i-j'");
            const auto idx = g.edge_index(std::stoul(key.substr(0, dash)), std::stoul(key.substr(dash + 1)));
            if (!idx) throw InvalidInput("detect config: edge '" + key + "' not in topology");
            p[*idx] = value.get<double>();
        }
        for (double v : p)
            if (v < 0.0) throw InvalidInput("detect config: 'links.p' must cover every edge");
        return p;
    }
    if (!l.contains("power")) throw InvalidInput("detect config: 'links' needs 'p' or 'power'");
    const double s = l["power"].get<double>();
    const double k_scale = get_or<double>(l, "k_scale", 6.25);
    const double alpha = get_or<double>(l, "alpha", 2.0);
    const std::vector<double> d = g.attributes();
    std::vector<double> p;
    for (double dist : d) p.push_back(link_probability(s, k_scale * std::pow(dist, alpha)));
    return p;
}

int run_detect(const DetectOptions& o, const Context& ctx) {
    RunManifest man;
    man.subcommand = "detect";
    man.add_input(o.config);
    const json cfg = read_json(o.config);
    static const std::set<std::string> allowed{"topology", "m", "sigma2", "horizon", "trials", "seed", "hypothesis", "links"};
    for (const auto& [key, _] : cfg.items())
        if (!allowed.contains(key)) throw InvalidInput("detect config: unknown key '" + key + "'");

    const auto base_dir = std::filesystem::path(o.config).parent_path();
    const Graph topo = load_topology(cfg, base_dir, man);
    std::vector<double> p;
    if (!o.power_file.empty()) {
        man.add_input(o.power_file);
        man.config["power_file"] = o.power_file;
        p = probabilities_from_power_file(o.power_file, topo);
    } else {
        p = link_probabilities(cfg, topo);
    }

    DetectionConfig dc{NetworkModel::link_failure(topo, p)};
    dc.m = get_or<double>(cfg, "m", 0.0447);
    dc.sigma2 = get_or<double>(cfg, "sigma2", 1.0);
    dc.horizon = o.horizon.value_or(get_or<std::size_t>(cfg, "horizon", 1000));
    dc.trials = o.trials.value_or(get_or<std::uint64_t>(cfg, "trials", 10000));
    dc.seed = o.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1));
    const std::string hyp = get_or<std::string>(cfg, "hypothesis", "H1");
    if (hyp == "H0") dc.truth = Hypothesis::H0;
    else if (hyp == "both") dc.average_hypotheses = true;
    else if (hyp != "H1") throw InvalidInput("detect config: hypothesis must be H0, H1 or both");
    dc.threads = ctx.threads;

    man.seed = dc.seed;
    man.config["config"] = cfg;
    man.config["resolved"] = {{"m", dc.m},           {"sigma2", dc.sigma2},   {"horizon", dc.horizon},
                              {"trials", dc.trials}, {"hypothesis", hyp},     {"level", o.level},
                              {"n", topo.n()},       {"links", topo.num_edges()}};
    if (!o.output.empty()) man.outputs.push_back(o.output);
    if (!o.summary.empty()) man.outputs.push_back(o.summary);

    const DetectionTrace tr = run_detection(dc);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < tr.horizon; ++k)
        rows.push_back({std::to_string(k + 1), num(tr.worst_error[k]), num(tr.worst_ci_low[k]), num(tr.worst_ci_high[k]),
                        std::to_string(tr.worst_sensor[k])});
    emit(o.output, csv_document({"k", "worst_error", "ci_low", "ci_high", "worst_sensor"}, rows, man));
    write_manifest_sidecar(o.output, man);

    if (!o.summary.empty()) {
        const auto k = tr.first_step_below(o.level);
        json s;
        s["level"] = o.level;
        s["first_step_below"] = k ? json(*k) : json(nullptr);
        s["final_worst_error"] = tr.worst_error.back();
        s["threshold_rate"] = optimality_threshold_gaussian(topo.n(), dc.m, dc.sigma2);
        emit(o.summary, json_document(s, man));
    }
    return kOk;
}

}  // namespace

void add_detect(CLI::App& app, const Context& ctx, Runner& run) {
    auto o = std::make_shared<DetectOptions>();
    auto* sub = app.add_subcommand("detect", "Consensus+innovations detection: worst-sensor error per step");
    sub->add_option("--config", o->config, "Detection JSON config")->required();
    sub->add_option("--power-file", o->power_file, "Allocation JSON from `allocate`; sets link probabilities");
    sub->add_option("--trials", o->trials, "Override config trials");
    sub->add_option("--seed", o->seed, "Override config seed");
    sub->add_option("--horizon", o->horizon, "Override config horizon");
    sub->add_option("--level", o->level, "Error level for the summary's first crossing")->capture_default_str();
    sub->add_option("-o,--output", o->output, "CSV output (default stdout)");
    sub->add_option("--summary", o->summary, "JSON summary output");
    sub->callback([o, &ctx, &run] { run = [o, &ctx] { return run_detect(*o, ctx); }; });
}

}  // namespace consrate::cli
