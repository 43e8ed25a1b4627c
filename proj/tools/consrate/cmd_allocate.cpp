#include <memory>

#include "commands.hpp"
#include "consrate/detect.hpp"
#include "consrate/error.hpp"
#include "consrate/power_alloc.hpp"
#include "output.hpp"

namespace consrate::cli {

namespace {

struct AllocateOptions {
    std::string graph;
    std::vector<std::size_t> geometric;
    std::string attr = "distance";
    double k_scale = 6.25;
    double alpha = 2.0;
    double i_star = 0.0;
    double mu = 500.0;
    double beta = 1e-4;
    std::size_t iters = 200000;
    std::uint64_t seed = 0;
    double jitter = 0.0;
    std::string output;
};

int run_allocate(const AllocateOptions& o) {
    RunManifest man;
    man.subcommand = "allocate";
    man.seed = o.seed;
    man.config = {{"attr", o.attr},   {"k_scale", o.k_scale}, {"alpha", o.alpha}, {"istar", o.i_star}, {"mu", o.mu},
                  {"beta", o.beta}, {"iters", o.iters},     {"jitter", o.jitter}};
    if (!o.output.empty()) man.outputs.push_back(o.output);

    Graph g;
    if (!o.graph.empty() == !o.geometric.empty()) throw InvalidInput("allocate: give exactly one of --graph, --geometric");
    if (!o.graph.empty()) {
        man.config["graph"] = o.graph;
        man.add_input(o.graph);
        g = read_graph_file(o.graph);
    } else {
        if (o.geometric.size() != 3) throw InvalidInput("allocate: --geometric takes n edges seed");
        man.config["geometric"] = o.geometric;
        g = random_geometric_network(o.geometric[0], o.geometric[1], o.geometric[2]).graph;
    }
    if (o.attr != "distance" && o.attr != "k") throw InvalidInput("allocate: --attr must be distance or k");
    const std::vector<double> a = g.attributes();
    std::vector<double> k;
    for (double v : a) k.push_back(o.attr == "k" ? v : o.k_scale * std::pow(v, o.alpha));

    AllocationOptions opt;
    opt.mu = o.mu;
    opt.beta = o.beta;
    opt.iterations = o.iters;
    opt.seed = o.seed;
    opt.jitter = o.jitter;
    opt.trace_every = 0;
    const AllocationResult res = optimize_allocation(FadingNetwork(g, k, k), o.i_star, opt);

    const FadingNetwork net(g, k, res.powers);
    const auto probs = net.link_probabilities();
    const auto costs = net.costs();
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        edges.push_back({{"i", g.edge(e).u}, {"j", g.edge(e).v}, {"K", k[e]}, {"S", res.powers[e]},
                         {"P_ij", probs[e]}, {"c_ij", costs[e]}});

    const double s_uniform = uniform_power_for_rate(g, k, o.i_star);
    const double uniform_total = s_uniform * static_cast<double>(g.num_edges());
    nlohmann::json j;
    j["edges"] = edges;
    j["total_power"] = res.total_power;
    j["rate"] = res.rate;
    j["i_star"] = o.i_star;
    j["violation"] = res.violation;
    j["feasible"] = res.feasible;
    j["iterations"] = res.iterations;
    j["best_iteration"] = res.best_iteration;
    j["uniform"] = {{"power_per_edge", s_uniform},
                    {"total_power", uniform_total},
                    {"saving_fraction", 1.0 - res.total_power / uniform_total}};
    emit(o.output, json_document(j, man));
    write_manifest_sidecar(o.output, man);
    return kOk;
}

}  // namespace

void add_allocate(CLI::App& app, const Context&, Runner& run) {
    auto o = std::make_shared<AllocateOptions>();
    auto* sub = app.add_subcommand("allocate", "Minimum total power subject to a consensus rate target");
    sub->add_option("--graph", o->graph, "Graph file with per-edge distance (or K) attributes");
    sub->add_option("--geometric", o->geometric, "Generate a random geometric topology: n edges seed")->expected(3);
    sub->add_option("--attr", o->attr, "distance (K = k_scale d^alpha) or k")->capture_default_str();
    sub->add_option("--k-scale", o->k_scale, "K = k_scale * d^alpha")->capture_default_str();
    sub->add_option("--alpha", o->alpha, "Path-loss exponent")->capture_default_str();
    sub->add_option("--istar", o->i_star, "Target rate I*")->required();
    sub->add_option("--mu", o->mu, "Penalty parameter")->capture_default_str();
    sub->add_option("--beta", o->beta, "Constant step size")->capture_default_str();
    sub->add_option("--iters", o->iters, "Subgradient iterations")->capture_default_str();
    sub->add_option("--seed", o->seed, "Seed for the initial-power jitter")->capture_default_str();
    sub->add_option("--jitter", o->jitter, "Relative jitter of the initial powers S = K")->capture_default_str();
    sub->add_option("-o,--output", o->output, "Output JSON file (default stdout)");
    sub->callback([o, &run] { run = [o] { return run_allocate(*o); }; });
}

}  // namespace consrate::cli
