#include <cmath>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "consrate/error.hpp"
#include "consrate/model_config.hpp"
#include "consrate/rate.hpp"
#include "consrate/simulate.hpp"
#include "output.hpp"

namespace consrate::cli {

namespace {

struct SimulateOptions {
    std::string model_file;
    std::size_t k_min = 1;
    std::size_t k_max = 0;
    std::size_t k_step = 1;
    double epsilon = 1.0;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    bool fast_graph_path = true;
    std::string csv;
    std::string summary;
};

int run_simulate(const SimulateOptions& o, const Context& ctx) {
    if (o.k_min < 1 || o.k_max < o.k_min || o.k_step < 1) throw InvalidInput("simulate: need 1 <= k-min <= k-max, k-step >= 1");
    if (!(o.epsilon > 0.0 && o.epsilon <= 1.0)) throw InvalidInput("simulate: epsilon must lie in (0, 1]");
    if (o.trials < 1) throw InvalidInput("simulate: trials must be at least 1");

    RunManifest man;
    man.subcommand = "simulate";
    man.seed = o.seed;
    man.config = {{"model_file", o.model_file}, {"k_min", o.k_min},     {"k_max", o.k_max},
                  {"k_step", o.k_step},         {"epsilon", o.epsilon}, {"trials", o.trials},
                  {"fast_graph_path", o.fast_graph_path}};
    man.add_input(o.model_file);
    if (!o.csv.empty()) man.outputs.push_back(o.csv);
    if (!o.summary.empty()) man.outputs.push_back(o.summary);

    const NetworkModel model = load_model_file(o.model_file);

    // Predicted tail p_max^k; k whose prediction falls under 10 / trials is refused.
    std::optional<double> p_max;
    std::vector<std::string> warnings;
    try {
        p_max = model_rate(model).p_max;
    } catch (const CapacityError& e) {
        warnings.push_back(std::string("p_max unavailable, no k refused: ") + e.what());
    }
    std::vector<std::size_t> ks, refused;
    for (std::size_t k = o.k_min; k <= o.k_max; k += o.k_step) {
        if (p_max && std::pow(*p_max, static_cast<double>(k)) < 10.0 / static_cast<double>(o.trials))
            refused.push_back(k);
        else
            ks.push_back(k);
    }

    SimulationOptions sopt;
    sopt.threads = ctx.threads;
    sopt.graph_fast_path = o.fast_graph_path;
    const auto points = ks.empty() ? std::vector<TailEstimate>{} : estimate_tail_series(model, ks, o.epsilon, o.trials, o.seed, sopt);

    std::vector<double> exact;
    try {
        if (!ks.empty()) exact = exact_disconnect_series(model, ks.back());
    } catch (const CapacityError&) {
        warnings.push_back("exact disconnection probability unavailable (state cap)");
    }

    std::vector<std::vector<std::string>> rows;
    for (const auto& p : points) {
        rows.push_back({std::to_string(p.k), num(p.p_hat), num(p.ci_low), num(p.ci_high), std::to_string(p.hits),
                        exact.empty() ? "" : num(exact[p.k - 1])});
    }
    emit(o.csv, csv_document({"k", "p_hat", "ci_low", "ci_high", "hits", "exact_dp"}, rows, man));

    nlohmann::json summary;
    summary["usable_k"] = nlohmann::json::array();
    summary["refused_k"] = refused;
    summary["p_max"] = p_max ? nlohmann::json(*p_max) : nlohmann::json(nullptr);
    summary["predicted_rate"] = p_max ? json_number(-std::log(*p_max)) : nlohmann::json(nullptr);
    int code = kOk;
    try {
        const RateFit fit = fit_rate(points);
        summary["empirical_rate"] = fit.rate;
        summary["std_error"] = fit.std_error;
        summary["intercept"] = fit.intercept;
        summary["usable_k"] = fit.used_k;
    } catch (const InsufficientData& e) {
        summary["empirical_rate"] = nullptr;
        summary["std_error"] = nullptr;
        summary["usable_k"] = e.usable();
        warnings.push_back(e.what());
        code = kInsufficientData;
    }
    summary["warnings"] = warnings;
    const std::string doc = json_document(summary, man);
    if (!o.summary.empty())
        emit(o.summary, doc);
    else if (!o.csv.empty())
        std::cout << doc;
    else
        std::cerr << doc;
    write_manifest_sidecar(o.csv, man);
    if (code == kInsufficientData) std::cerr << "insufficient data: fewer than 3 usable k\n";
    return code;
}

}  // namespace

void add_simulate(CLI::App& app, const Context& ctx, Runner& run) {
    auto o = std::make_shared<SimulateOptions>();
    auto* sub = app.add_subcommand("simulate", "Monte-Carlo tail probabilities and empirical rate");
    sub->add_option("--model-file", o->model_file, "JSON model config")->required();
    sub->add_option("--k-min", o->k_min, "Smallest k")->capture_default_str();
    sub->add_option("--k-max", o->k_max, "Largest k")->required();
    sub->add_option("--k-step", o->k_step, "Step between k values")->capture_default_str();
    sub->add_option("--epsilon", o->epsilon, "Threshold on ||Phi(k,0) - J||, in (0, 1]")->capture_default_str();
    sub->add_option("--trials", o->trials, "Trials per k")->capture_default_str();
    sub->add_option("--seed", o->seed, "Master seed")->capture_default_str();
    sub->add_flag("--fast-graph-path,!--no-fast-graph-path", o->fast_graph_path,
                  "At epsilon = 1, simulate edge unions instead of matrix products (default on)");
    sub->add_option("--csv", o->csv, "Per-k CSV output (default stdout)");
    sub->add_option("--summary", o->summary, "JSON summary output (default stdout after --csv, else stderr)");
    sub->callback([o, &ctx, &run] { run = [o, &ctx] { return run_simulate(*o, ctx); }; });
}

}  // namespace consrate::cli
