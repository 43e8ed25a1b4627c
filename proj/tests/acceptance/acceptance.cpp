// Acceptance suite: one PASS/FAIL line per criterion. `consrate_acceptance [N ...]`
// runs only the listed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "consrate/collections.hpp"
#include "consrate/detect.hpp"
#include "consrate/mincut.hpp"
#include "consrate/power_alloc.hpp"
#include "consrate/rate.hpp"
#include "consrate/simulate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace consrate;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit_s;
    std::function<Outcome()> run;
};

Outcome cross_method_agreement() {
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Graph g = oracle::random_connected_graph(2 + rng() % 5, 0.4, rng);
        const auto p = oracle::random_simplex(g.num_edges(), rng);
        const auto cut = gossip_rate(g, p);
        const auto brute = p_max_brute(NetworkModel::gossip(g, p));
        worst = std::max(worst, std::abs(cut.rate - brute.rate));
    }
    for (int t = 0; t < 50; ++t) {
        const Graph g = oracle::random_connected_graph(2 + rng() % 5, 0.4, rng, 10);
        const auto p = oracle::random_uniforms(g.num_edges(), 0.0, 1.0, rng);
        const auto cut = link_failure_rate(g, p);
        const auto brute = p_max_brute(NetworkModel::link_failure(g, p));
        worst = std::max(worst, std::abs(cut.rate - brute.rate));
    }
    return {worst <= 1e-9, fmt::format("100 instances, max |mincut - brute| = {:.3g} (tol 1e-9)", worst)};
}

Outcome closed_forms() {
    const double gossip = regular_gossip_rate(4, 3).rate;
    const double lf = regular_link_failure_rate(4, 2, 0.5).rate;
    const double thr = optimality_threshold_gaussian(14, 0.0447, 1.0);
    const bool ok = std::abs(gossip - std::log(2.0)) <= 1e-15 && std::abs(lf - 2 * std::log(2.0)) <= 1e-15 &&
                    std::abs(thr - 0.0455) <= 5e-5;
    return {ok, fmt::format("gossip n=4 I={:.17g}, link failure d=2 p=0.5 I={:.17g}, I*={:.6f} (target 0.0455 +- 5e-5)",
                            gossip, lf, thr)};
}

Outcome sandwich() {
    const auto toy = fixtures::toy_model();
    const double p_max = p_max_brute(toy).p_max;
    const double count = static_cast<double>(enumerate_maximal_collections(toy).size());
    const auto series = exact_disconnect_series(toy, 30);
    bool inside = true;
    for (std::size_t k = 1; k <= 30; ++k) {
        const double lo = std::pow(p_max, static_cast<double>(k));
        inside = inside && series[k - 1] >= lo * (1 - 1e-12) && series[k - 1] <= count * lo * (1 + 1e-12);
    }
    const double ratio = series[29] / series[28];
    const bool ok = inside && std::abs(ratio - p_max) <= 1e-6;
    return {ok, fmt::format("k<=30 inside [p^k, {}p^k]: {}, ratio at k=30 = {:.12f} vs p_max {:.12f}", count,
                            inside ? "yes" : "no", ratio, p_max)};
}

Outcome empirical_rate() {
    SimulationOptions opt;
    opt.threads = 0;
    std::vector<std::size_t> ks;
    for (std::size_t k = 4; k <= 16; ++k) ks.push_back(k);
    const auto toy = estimate_rate_empirical(fixtures::toy_model(), ks, 1.0, 1'000'000, 20240601, opt);
    const double toy_target = -std::log(2.0 / 3);
    const double z = std::abs(toy.rate - toy_target) / toy.std_error;

    std::vector<std::size_t> gk;
    for (std::size_t k = 2; k <= 12; ++k) gk.push_back(k);
    const auto k4 = estimate_rate_empirical(fixtures::k4_gossip(), gk, 0.9, 200'000, 20240602, opt);
    const double rel = std::abs(k4.rate - std::log(2.0)) / std::log(2.0);

    // exact finite-k slope of the same fit, for the record
    const auto exact = exact_disconnect_series(fixtures::toy_model(), 16);
    std::vector<TailEstimate> ideal;
    for (std::size_t k : ks) {
        auto t = make_tail_estimate(k, 1.0, 1'000'000, static_cast<std::uint64_t>(std::llround(exact[k - 1] * 1e6)));
        ideal.push_back(t);
    }
    const double ideal_slope = fit_rate(ideal).rate;

    const bool ok = z <= 3.0 && rel <= 0.2;
    return {ok, fmt::format("toy I={:.6f} +- {:.6f} vs {:.6f} ({:.1f} SE; noiseless fit on exact P_k gives {:.6f}); "
                            "K4 eps=0.9 I={:.4f} ({:.1f}% from log 2)",
                            toy.rate, toy.std_error, toy_target, z, ideal_slope, k4.rate, 100 * rel)};
}

Outcome structural_suite() {
    const std::vector<std::pair<std::string, NetworkModel>> families{
        {"gossip", NetworkModel::gossip(complete_graph(5), std::vector<double>(10, 0.1))},
        {"link-failure", NetworkModel::link_failure(complete_graph(5), std::vector<double>(10, 0.35))},
        {"d-adjacent", NetworkModel::d_adjacent(cycle_graph(5))},
        {"explicit", fixtures::toy_model()},
    };
    constexpr int kTrajectories = 10000;
    constexpr std::size_t kSteps = 30;
    std::size_t violations = 0;
    std::string first;
    std::uint64_t checked = 0;
    for (std::size_t f = 0; f < families.size(); ++f) {
        const auto& model = families[f].second;
        for (int traj = 0; traj < kTrajectories; ++traj) {
            Rng rng = make_stream(5000 + f, static_cast<std::uint64_t>(traj));
            ProductState s(model.n());
            for (std::size_t t = 0; t < kSteps; ++t) {
                const Graph g = model.sample_graph(rng);
                s.step(model.sample_matrix(g, rng));
                const auto v = check_structural_invariants(s, model.delta());
                ++checked;
                if (!v.empty() && violations++ == 0)
                    first = families[f].first + ": " + v.front().check + " " + v.front().detail;
            }
        }
    }
    return {violations == 0, fmt::format("{} products over 4 families x {} trajectories (k<=30), {} violations{}",
                                         checked, kTrajectories, violations, first.empty() ? "" : "; first: " + first)};
}

Outcome infinite_rate_branch() {
    const auto model = NetworkModel::explicit_model(
        4, {{path_graph(4), 0.5, std::nullopt}, {star_graph(4), 0.5, std::nullopt}});
    const auto rate = p_max_brute(model);
    const double c = path_fiedler_constant(4);
    const double delta = model.delta();
    const double base = 1.0 - c * delta * delta;
    const double eps = 0.5;
    const std::size_t k1 = static_cast<std::size_t>(std::ceil(2.0 * std::log(eps) / std::log(base)));
    std::size_t over = 0;
    for (int traj = 0; traj < 10000; ++traj) {
        Rng rng = make_stream(6000, static_cast<std::uint64_t>(traj));
        ProductState s(4);
        for (std::size_t k = 1; k <= k1 + 10; ++k) {
            const Graph g = model.sample_graph(rng);
            s.step(model.sample_matrix(g, rng));
            if (error_norm(s) > std::pow(base, 0.5 * static_cast<double>(k)) * (1 + 1e-9) + 1e-12) ++over;
        }
    }
    std::uint64_t hits = 0;
    for (std::size_t k = k1; k <= k1 + 10; ++k) hits += estimate_tail(model, k, eps, 10000, 6001 + k).hits;
    const bool ok = !rate.finite() && over == 0 && hits == 0;
    return {ok, fmt::format("rate {}, delta {}, bound exceedances {}, tail hits for k in [{}, {}] at eps 0.5: {}",
                            rate.finite() ? "finite" : "inf", delta, over, k1, k1 + 10, hits)};
}

Outcome mincut_correctness() {
    std::mt19937_64 rng(1007);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const Graph g = oracle::random_graph(2 + rng() % 9, 0.5, rng);
        const auto costs = oracle::random_uniforms(g.num_edges(), 0.0, 5.0, rng);
        worst = std::max(worst, std::abs(stoer_wagner(g, costs).value - exhaustive_mincut(g, costs).value));
    }
    return {worst <= 1e-9, fmt::format("500 graphs n<=10, max |SW - exhaustive| = {:.3g}", worst)};
}

Outcome convexity_numerics() {
    std::mt19937_64 rng(1008);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_net = [&](const Graph& g, const std::vector<double>& k) {
        // powers log-uniform on [0.1 K, 10 K]
        std::vector<double> s(k.size());
        for (std::size_t e = 0; e < k.size(); ++e) s[e] = k[e] * std::pow(10.0, 2 * u(rng) - 1);
        return FadingNetwork(g, k, s);
    };
    auto mix = [](const FadingNetwork& a, const FadingNetwork& b, double lambda) {
        std::vector<double> s(a.s().size());
        for (std::size_t e = 0; e < s.size(); ++e) s[e] = lambda * a.s()[e] + (1 - lambda) * b.s()[e];
        return a.with_powers(s);
    };
    int concave_bad = 0, convex_bad = 0;
    double concave_worst = 0.0, convex_worst = 0.0;
    int concave_bad_upper = 0;
    for (int t = 0; t < 100; ++t) {
        const Graph g = oracle::random_connected_graph(6, 0.4, rng);
        const auto k = oracle::random_uniforms(g.num_edges(), 0.05, 0.6, rng);
        const auto a = random_net(g, k), b = random_net(g, k);
        const double lambda = u(rng);
        const double gap = lambda * rate_of_allocation(a).rate + (1 - lambda) * rate_of_allocation(b).rate -
                           rate_of_allocation(mix(a, b, lambda)).rate;
        if (gap > 1e-8) {
            ++concave_bad;
            concave_worst = std::max(concave_worst, gap);
        }
        // same segment restricted to S >= 0.63 K, where each edge cost is concave
        std::vector<double> sa = a.s(), sb = b.s();
        for (std::size_t e = 0; e < k.size(); ++e) {
            sa[e] = std::max(sa[e], 0.63 * k[e]);
            sb[e] = std::max(sb[e], 0.63 * k[e]);
        }
        const auto ua = a.with_powers(sa), ub = b.with_powers(sb);
        if (lambda * rate_of_allocation(ua).rate + (1 - lambda) * rate_of_allocation(ub).rate -
                rate_of_allocation(mix(ua, ub, lambda)).rate >
            1e-8)
            ++concave_bad_upper;

        const double i_star = 0.5 * (rate_of_allocation(a).rate + rate_of_allocation(b).rate);
        const double pgap = penalty_objective(mix(a, b, 0.5), 500, i_star) -
                            0.5 * (penalty_objective(a, 500, i_star) + penalty_objective(b, 500, i_star));
        if (pgap > 1e-8) {
            ++convex_bad;
            convex_worst = std::max(convex_worst, pgap);
        }
    }
    double fd_worst = 0.0;
    for (double k : {0.05, 0.25, 1.0, 4.0})
        for (double s = 0.1 * k; s <= 10.0 * k; s *= 1.2) {
            const double h = 1e-5 * s;
            const double fd = (edge_cost(s + h, k) - edge_cost(s - h, k)) / (2 * h);
            fd_worst = std::max(fd_worst, std::abs(edge_cost_derivative(s, k) - fd) / std::abs(fd));
        }
    const bool ok = concave_bad == 0 && convex_bad == 0 && fd_worst <= 1e-6;
    return {ok, fmt::format("S log-uniform on [0.1K, 10K]: concavity violated on {}/100 segments (worst {:.3g}), "
                            "penalty convexity violated on {}/100 (worst {:.3g}); with S clipped to >= 0.63K: {}/100; "
                            "c' vs finite differences max rel err {:.3g}",
                            concave_bad, concave_worst, convex_bad, convex_worst, concave_bad_upper, fd_worst)};
}

Outcome single_edge_optimum() {
    const double k = 6.25 * 0.2 * 0.2;
    const double i_star = 0.0455;
    const double exact = single_edge_optimal_power(k, i_star);
    const auto res = optimize_allocation(FadingNetwork(path_graph(2), {k}, {k}), i_star);
    const double rel = std::abs(res.total_power - exact) / exact;
    return {res.feasible && rel <= 0.01,
            fmt::format("S = {:.6g} vs closed form {:.6g} (rel err {:.3g}, tol 1%)", res.total_power, exact, rel)};
}

struct DetectRun {
    std::optional<std::size_t> k;
    double final_error = 0.0;
};

DetectRun detect_steps(const Graph& g, const std::vector<double>& p, std::size_t horizon, std::uint64_t seed) {
    DetectionConfig cfg{NetworkModel::link_failure(g, p)};
    cfg.m = 0.0447;
    cfg.sigma2 = 1.0;
    cfg.horizon = horizon;
    cfg.trials = 10000;
    cfg.seed = seed;
    cfg.threads = 0;
    const auto tr = run_detection(cfg);
    return {tr.first_step_below(0.1), tr.worst_error.back()};
}

Outcome geometric_experiment() {
    const auto net = random_geometric_network(14, 38, 2024);
    std::vector<double> k;
    for (double d : net.graph.attributes()) k.push_back(6.25 * d * d);
    const double i_star = optimality_threshold_gaussian(14, 0.0447, 1.0);
    const auto res = optimize_allocation(FadingNetwork(net.graph, k, k), i_star);
    const FadingNetwork opt_net(net.graph, k, res.powers);

    const double mean_s = res.total_power / static_cast<double>(k.size());
    const FadingNetwork uni_net(net.graph, k, std::vector<double>(k.size(), mean_s));
    const double uniform_same_rate = uniform_power_for_rate(net.graph, k, i_star) * static_cast<double>(k.size());

    constexpr std::size_t kHorizon = 6000;
    const auto opt_run = detect_steps(net.graph, opt_net.link_probabilities(), kHorizon, 77);
    const auto uni_run = detect_steps(net.graph, uni_net.link_probabilities(), kHorizon, 77);

    std::string verdict;
    bool ok = false;
    if (!opt_run.k) {
        verdict = "optimized allocation never reached error 0.1";
    } else if (!uni_run.k) {
        ok = true;
        verdict = fmt::format("uniform did not reach 0.1 within {} steps (error {:.4f}), saving > {:.1f}%", kHorizon,
                              uni_run.final_error, 100.0 * (1.0 - static_cast<double>(*opt_run.k) / kHorizon));
    } else {
        const double saving = 1.0 - static_cast<double>(*opt_run.k) / static_cast<double>(*uni_run.k);
        ok = saving >= 0.5;
        verdict = fmt::format("steps to 0.1: optimized {}, uniform {}; consumed-power saving {:.1f}% (bar 50%)",
                              *opt_run.k, *uni_run.k, 100 * saving);
    }
    ok = ok && res.feasible;
    return {ok, fmt::format("rate {:.5f} vs I* {:.5f} (violation {:.2g}), per-step power {:.4f}, uniform power for the "
                            "same rate {:.4f} ({:.1f}% more); {}",
                            res.rate, i_star, res.violation, res.total_power, uniform_same_rate,
                            100 * (uniform_same_rate / res.total_power - 1), verdict)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "cross-method agreement (mincut vs enumeration)", 60, cross_method_agreement},
        {2, "closed forms and detection threshold", 1, closed_forms},
        {3, "exact disconnection sandwich", 1, sandwich},
        {4, "empirical rate (Monte Carlo)", 300, empirical_rate},
        {5, "structural invariant suite", 300, structural_suite},
        {6, "infinite-rate branch", 60, infinite_rate_branch},
        {7, "min-cut correctness", 60, mincut_correctness},
        {8, "concavity / convexity numerics", 60, convexity_numerics},
        {9, "single-edge power optimum", 10, single_edge_optimum},
        {10, "geometric network power saving", 1800, geometric_experiment},
    };
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.time_limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::printf("[%s] %2d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), secs, c.time_limit_s, in_time ? "" : ", over time");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
