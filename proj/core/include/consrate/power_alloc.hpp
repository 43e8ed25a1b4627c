#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "consrate/collections.hpp"
#include "consrate/graph.hpp"

namespace consrate {

/// Link on-probability under Rayleigh fading, exp(-K/S). Throws for S <= 0.
double link_probability(double s, double k);
/// -log(1 - exp(-K/S)); tends to 0 as S -> 0+.
double edge_cost(double s, double k);
/// d/dS of edge_cost: (K/S^2) / (exp(K/S) - 1).
double edge_cost_derivative(double s, double k);

/// Base graph with per-edge channel constants K_e and powers S_e (aligned with edges()).
class FadingNetwork {
public:
    FadingNetwork(Graph graph, std::vector<double> k, std::vector<double> s);

    const Graph& graph() const noexcept { return graph_; }
    const std::vector<double>& k() const noexcept { return k_; }
    const std::vector<double>& s() const noexcept { return s_; }
    /// Projection floor 1e-6 * min K.
    double s_min() const noexcept { return s_min_; }
    double total_power() const;
    std::vector<double> link_probabilities() const;
    std::vector<double> costs() const;

    /// Same network with new powers, each clamped to s_min().
    FadingNetwork with_powers(std::vector<double> s) const;

private:
    Graph graph_;
    std::vector<double> k_;
    std::vector<double> s_;
    double s_min_;
};

/// Min-cut of the edge costs; the cut witness is the subgradient support.
RateResult rate_of_allocation(const FadingNetwork& net);

/// sum S + mu * max(0, I* - I(S)).
double penalty_objective(const FadingNetwork& net, double mu, double i_star);

/// One projected subgradient step on the penalty objective with step beta.
FadingNetwork subgradient_step(const FadingNetwork& net, double mu, double i_star, double beta);

struct AllocationOptions {
    double mu = 500.0;
    double beta = 1e-4;
    std::size_t iterations = 200000;
    double tol_rate = 1e-6;
    /// Multiplicative uniform jitter of the initial powers, S_e *= 1 + jitter (2u - 1).
    double jitter = 0.0;
    std::uint64_t seed = 0;
    /// Record the objective every this many iterations (0 disables the trace).
    std::size_t trace_every = 1000;
};

struct AllocationResult {
    std::vector<double> powers;
    double total_power = 0.0;
    double rate = 0.0;
    double violation = 0.0;
    bool feasible = false;
    std::size_t iterations = 0;
    /// Iteration index of the returned point (0 is the initial point).
    std::size_t best_iteration = 0;
    std::vector<double> objective_trace;
};

/// Projected subgradient method from net0's powers. Returns the cheapest iterate with
/// I >= I* - tol_rate, or the least-violating iterate when none is feasible; the rate
/// is recomputed at the returned point.
AllocationResult optimize_allocation(const FadingNetwork& net0, double i_star, const AllocationOptions& options = {});

/// Smallest S with edge_cost(S, K) >= I*: K / (-log(1 - exp(-I*))).
double single_edge_optimal_power(double k, double i_star);

/// Smallest common power S (all edges equal) with rate >= I*, by bisection to
/// relative precision 1e-12.
double uniform_power_for_rate(const Graph& graph, const std::vector<double>& k, double i_star);

}  // namespace consrate
