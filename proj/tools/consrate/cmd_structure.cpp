#include <memory>

#include "commands.hpp"
#include "consrate/collections.hpp"
#include "consrate/error.hpp"
#include "consrate/mincut.hpp"
#include "consrate/model_config.hpp"
#include "consrate/rate.hpp"
#include "output.hpp"

namespace consrate::cli {

namespace {

struct RateOptions {
    std::string model;
    std::string graph;
    std::string model_file;
    std::string closed_form;
    std::optional<double> p;
    bool bits = false;
    std::size_t cap = kDefaultEnumerationCap;
    std::string output;
};

/// "regular:<n>,<d>[,<p>]"
std::vector<double> parse_closed_form(const std::string& spec) {
    const std::string prefix = "regular:";
    if (spec.rfind(prefix, 0) != 0) throw InvalidInput("--closed-form must look like regular:<n>,<d>[,<p>]");
    std::vector<double> values;
    std::stringstream in(spec.substr(prefix.size()));
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw InvalidInput("");
        } catch (const std::exception&) {
            throw InvalidInput("--closed-form: bad number '" + item + "'");
        }
    }
    if (values.size() < 2 || values.size() > 3) throw InvalidInput("--closed-form must look like regular:<n>,<d>[,<p>]");
    for (std::size_t i = 0; i < 2; ++i)
        if (values[i] < 0 || values[i] != std::floor(values[i])) throw InvalidInput("--closed-form: n and d must be integers");
    return values;
}

int run_rate(const RateOptions& o) {
    RunManifest man;
    man.subcommand = "rate";
    man.config = {{"bits", o.bits}, {"cap", o.cap}};
    if (!o.output.empty()) man.outputs.push_back(o.output);

    const int sources = !o.graph.empty() + !o.model_file.empty() + !o.closed_form.empty();
    if (sources != 1) throw InvalidInput("rate: give exactly one of --graph, --model-file, --closed-form");

    RateResult result;
    nlohmann::json model_desc;
    if (!o.model_file.empty()) {
        man.config["model_file"] = o.model_file;
        man.add_input(o.model_file);
        const NetworkModel model = load_model_file(o.model_file);
        model_desc = to_string(model.kind());
        result = model_rate(model, o.cap);
    } else {
        if (o.model != "gossip" && o.model != "link-failure")
            throw InvalidInput("rate: --model must be gossip or link-failure");
        man.config["model"] = o.model;
        model_desc = o.model;
        if (!o.closed_form.empty()) {
            man.config["closed_form"] = o.closed_form;
            const auto v = parse_closed_form(o.closed_form);
            const auto n = static_cast<std::size_t>(v[0]);
            const auto d = static_cast<std::size_t>(v[1]);
            if (o.model == "gossip") {
                if (v.size() == 3) throw InvalidInput("rate: regular gossip takes no probability");
                result = regular_gossip_rate(n, d);
            } else {
                const double p = v.size() == 3 ? v[2] : o.p.value_or(-1.0);
                if (p < 0.0) throw InvalidInput("rate: regular link failure needs a probability");
                result = regular_link_failure_rate(n, d, p);
            }
        } else {
            man.config["graph"] = o.graph;
            man.add_input(o.graph);
            const Graph g = read_graph_file(o.graph);
            std::vector<double> p;
            if (o.p) {
                man.config["p"] = *o.p;
                p.assign(g.num_edges(), *o.p);
            } else if (g.fully_attributed() && g.num_edges() > 0) {
                p = g.attributes();
            } else if (o.model == "gossip") {
                p.assign(g.num_edges(), 1.0 / static_cast<double>(g.num_edges()));
            } else {
                throw InvalidInput("rate: link-failure graph needs per-edge probabilities or --p");
            }
            result = o.model == "gossip" ? gossip_rate(g, p) : link_failure_rate(g, p);
        }
    }
    nlohmann::json j = rate_json(result, o.bits);
    j["model"] = model_desc;
    emit(o.output, json_document(j, man));
    write_manifest_sidecar(o.output, man);
    return kOk;
}

struct MincutOptions {
    std::string graph;
    bool exhaustive = false;
    std::string output;
};

int run_mincut(const MincutOptions& o) {
    RunManifest man;
    man.subcommand = "mincut";
    man.config = {{"graph", o.graph}, {"exhaustive", o.exhaustive}};
    man.add_input(o.graph);
    if (!o.output.empty()) man.outputs.push_back(o.output);

    const Graph g = read_graph_file(o.graph);
    bool unit = true;
    for (std::size_t e = 0; e < g.num_edges(); ++e) unit = unit && !g.attribute(e).has_value();
    const std::vector<double> costs = unit ? std::vector<double>(g.num_edges(), 1.0) : g.attributes();
    const CutResult cut = o.exhaustive ? exhaustive_mincut(g, costs) : stoer_wagner(g, costs);
    nlohmann::json j = cut_json(cut);
    j["algorithm"] = o.exhaustive ? "exhaustive" : "stoer-wagner";
    j["unit_costs"] = unit;
    emit(o.output, json_document(j, man));
    write_manifest_sidecar(o.output, man);
    return kOk;
}

struct EnumerateOptions {
    std::string model_file;
    std::size_t cap = kDefaultEnumerationCap;
    bool all = false;
    std::string output;
};

int run_enumerate(const EnumerateOptions& o) {
    RunManifest man;
    man.subcommand = "enumerate";
    man.config = {{"model_file", o.model_file}, {"cap", o.cap}, {"all", o.all}};
    man.add_input(o.model_file);
    if (!o.output.empty()) man.outputs.push_back(o.output);

    const NetworkModel model = load_model_file(o.model_file);
    const auto list = o.all ? enumerate_disconnected_collections(model, o.cap) : enumerate_maximal_collections(model, o.cap);
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : list) cols.push_back(collection_json(c));
    const RateResult best = p_max_brute(model, o.cap);
    nlohmann::json j;
    j["kind"] = o.all ? "disconnected" : "maximal";
    j["count"] = list.size();
    j["collections"] = cols;
    j["p_max"] = best.p_max;
    j["rate"] = json_number(best.rate);
    j["rate_infinite"] = std::isinf(best.rate);
    emit(o.output, json_document(j, man));
    write_manifest_sidecar(o.output, man);
    return kOk;
}

}  // namespace

void add_rate(CLI::App& app, const Context&, Runner& run) {
    auto o = std::make_shared<RateOptions>();
    auto* sub = app.add_subcommand("rate", "Exact rate I = -log p_max (min-cut, closed form or enumeration)");
    sub->add_option("--model", o->model, "gossip | link-failure (with --graph or --closed-form)");
    sub->add_option("--graph", o->graph, "Graph file; edge attributes are probabilities");
    sub->add_option("--model-file", o->model_file, "JSON model config (any model type)");
    sub->add_option("--closed-form", o->closed_form, "regular:<n>,<d>[,<p>]");
    sub->add_option("--p", o->p, "Uniform edge probability (overrides graph attributes)");
    sub->add_flag("--bits", o->bits, "Report the rate in bits instead of nats");
    sub->add_option("--cap", o->cap, "Enumeration cap for brute-force routes")->capture_default_str();
    sub->add_option("-o,--output", o->output, "Output JSON file (default stdout)");
    sub->callback([o, &run] { run = [o] { return run_rate(*o); }; });
}

void add_mincut(CLI::App& app, const Context&, Runner& run) {
    auto o = std::make_shared<MincutOptions>();
    auto* sub = app.add_subcommand("mincut", "Global minimum cut; edge attributes are costs (unit if absent)");
    sub->add_option("--graph", o->graph, "Graph file")->required();
    sub->add_flag("--exhaustive", o->exhaustive, "Enumerate all bipartitions instead of Stoer-Wagner (n <= 16)");
    sub->add_option("-o,--output", o->output, "Output JSON file (default stdout)");
    sub->callback([o, &run] { run = [o] { return run_mincut(*o); }; });
}

void add_enumerate(CLI::App& app, const Context&, Runner& run) {
    auto o = std::make_shared<EnumerateOptions>();
    auto* sub = app.add_subcommand("enumerate", "List maximal disconnected collections of a model");
    sub->add_option("--model-file", o->model_file, "JSON model config")->required();
    sub->add_option("--cap", o->cap, "Enumeration cap")->capture_default_str();
    sub->add_flag("--all", o->all, "List every disconnected collection instead of the maximal ones");
    sub->add_option("-o,--output", o->output, "Output JSON file (default stdout)");
    sub->callback([o, &run] { run = [o] { return run_enumerate(*o); }; });
}

}  // namespace consrate::cli
