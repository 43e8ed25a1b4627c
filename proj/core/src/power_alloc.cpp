#include "consrate/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "consrate/error.hpp"
#include "consrate/mincut.hpp"
#include "consrate/rng.hpp"

namespace consrate {

double link_probability(double s, double k) {
    if (!(s > 0.0)) throw InvalidInput("power must be positive");
    if (!(k > 0.0)) throw InvalidInput("channel constant K must be positive");
    return std::exp(-k / s);
}

double edge_cost(double s, double k) {
    if (!(s > 0.0)) return 0.0;
    return -std::log(-std::expm1(-k / s));
}

double edge_cost_derivative(double s, double k) {
    if (!(s > 0.0)) return 0.0;
    const double r = k / s;
    return (r / s) / std::expm1(r);
}

FadingNetwork::FadingNetwork(Graph graph, std::vector<double> k, std::vector<double> s)
    : graph_(std::move(graph)), k_(std::move(k)), s_(std::move(s)) {
    if (k_.size() != graph_.num_edges() || s_.size() != graph_.num_edges())
        throw InvalidInput("fading network: one K and one S per edge required");
    if (k_.empty()) throw InvalidInput("fading network needs at least one edge");
    for (double v : k_)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("fading network: K must be positive and finite");
    s_min_ = 1e-6 * *std::min_element(k_.begin(), k_.end());
    for (double& v : s_) {
        if (!(v > 0.0)) throw InvalidInput("fading network: powers must be positive");
        v = std::max(v, s_min_);
    }
}

double FadingNetwork::total_power() const { return std::accumulate(s_.begin(), s_.end(), 0.0); }

std::vector<double> FadingNetwork::link_probabilities() const {
    std::vector<double> out(s_.size());
    for (std::size_t e = 0; e < s_.size(); ++e) out[e] = link_probability(s_[e], k_[e]);
    return out;
}

std::vector<double> FadingNetwork::costs() const {
    std::vector<double> out(s_.size());
    for (std::size_t e = 0; e < s_.size(); ++e) out[e] = edge_cost(s_[e], k_[e]);
    return out;
}

FadingNetwork FadingNetwork::with_powers(std::vector<double> s) const { return FadingNetwork(graph_, k_, std::move(s)); }

RateResult rate_of_allocation(const FadingNetwork& net) {
    CutResult cut = stoer_wagner(net.graph(), net.costs());
    RateResult r;
    r.method = RateMethod::MinCut;
    r.rate = cut.value;
    r.p_max = std::exp(-cut.value);
    r.cut = std::move(cut);
    return r;
}

double penalty_objective(const FadingNetwork& net, double mu, double i_star) {
    if (!(mu > 0.0)) throw InvalidInput("penalty parameter mu must be positive");
    return net.total_power() + mu * std::max(0.0, i_star - rate_of_allocation(net).rate);
}

namespace {

/// In-place projected step given the rate and minimising cut at the current point.
void step_in_place(const Graph& g, const std::vector<double>& k, std::vector<double>& s, double s_min,
                   const RateResult& rate, double mu, double i_star, double beta) {
    std::vector<double> grad(s.size(), 1.0);
    if (rate.rate < i_star) {
        for (const Edge& e : rate.cut->cut_edges) {
            const std::size_t idx = *g.edge_index(e.u, e.v);
            grad[idx] -= mu * edge_cost_derivative(s[idx], k[idx]);
        }
    }
    for (std::size_t e = 0; e < s.size(); ++e) s[e] = std::max(s_min, s[e] - beta * grad[e]);
}

}  // namespace

FadingNetwork subgradient_step(const FadingNetwork& net, double mu, double i_star, double beta) {
    if (!(beta > 0.0)) throw InvalidInput("step size beta must be positive");
    if (!(mu > 0.0)) throw InvalidInput("penalty parameter mu must be positive");
    std::vector<double> s = net.s();
    step_in_place(net.graph(), net.k(), s, net.s_min(), rate_of_allocation(net), mu, i_star, beta);
    return net.with_powers(std::move(s));
}

AllocationResult optimize_allocation(const FadingNetwork& net0, double i_star, const AllocationOptions& opt) {
    if (opt.iterations < 1) throw InvalidInput("allocation needs at least one iteration");
    if (!(opt.beta > 0.0)) throw InvalidInput("step size beta must be positive");
    if (!(opt.mu > 0.0)) throw InvalidInput("penalty parameter mu must be positive");
    if (opt.jitter < 0.0 || opt.jitter >= 1.0) throw InvalidInput("jitter must lie in [0, 1)");

    const Graph& g = net0.graph();
    const std::vector<double>& k = net0.k();
    const double s_min = net0.s_min();
    std::vector<double> s = net0.s();
    if (opt.jitter > 0.0) {
        Rng rng = make_stream(opt.seed, 0);
        for (double& v : s) v = std::max(s_min, v * (1.0 + opt.jitter * (2.0 * uniform01(rng) - 1.0)));
    }

    AllocationResult res;
    std::vector<double> best_s;
    double best_total = std::numeric_limits<double>::infinity();
    std::vector<double> least_s;
    double least_violation = std::numeric_limits<double>::infinity();
    bool have_feasible = false;

    for (std::size_t it = 0; it <= opt.iterations; ++it) {
        const FadingNetwork cur(g, k, s);
        const RateResult rate = rate_of_allocation(cur);
        const double total = cur.total_power();
        const double violation = std::max(0.0, i_star - rate.rate);
        if (opt.trace_every > 0 && it % opt.trace_every == 0) res.objective_trace.push_back(total + opt.mu * violation);
        if (rate.rate >= i_star - opt.tol_rate) {
            if (total < best_total) {
                best_total = total;
                best_s = s;
                res.best_iteration = it;
                have_feasible = true;
            }
        } else if (!have_feasible && violation < least_violation) {
            least_violation = violation;
            least_s = s;
            res.best_iteration = it;
        }
        if (it == opt.iterations) break;
        step_in_place(g, k, s, s_min, rate, opt.mu, i_star, opt.beta);
    }

    res.iterations = opt.iterations;
    res.feasible = have_feasible;
    res.powers = have_feasible ? best_s : least_s;
    const FadingNetwork final_net(g, k, res.powers);
    res.total_power = final_net.total_power();
    res.rate = rate_of_allocation(final_net).rate;
    res.violation = std::max(0.0, i_star - res.rate);
    return res;
}

double single_edge_optimal_power(double k, double i_star) {
    if (!(k > 0.0)) throw InvalidInput("channel constant K must be positive");
    if (!(i_star > 0.0)) throw InvalidInput("target rate must be positive");
    return k / -std::log(-std::expm1(-i_star));
}

double uniform_power_for_rate(const Graph& graph, const std::vector<double>& k, double i_star) {
    if (!is_connected(graph)) throw InvalidInput("uniform_power_for_rate: graph must be connected");
    if (!(i_star > 0.0)) throw InvalidInput("target rate must be positive");
    auto rate_at = [&](double s) {
        return rate_of_allocation(FadingNetwork(graph, k, std::vector<double>(k.size(), s))).rate;
    };
    double lo = 1e-6 * *std::min_element(k.begin(), k.end());
    double hi = *std::max_element(k.begin(), k.end());
    while (rate_at(hi) < i_star) {
        hi *= 2.0;
        if (!std::isfinite(hi)) throw InvalidInput("uniform_power_for_rate: target rate unreachable");
    }
    if (rate_at(lo) >= i_star) return lo;
    while ((hi - lo) > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (rate_at(mid) >= i_star ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace consrate
