#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "consrate/graph.hpp"
#include "consrate/models.hpp"

namespace consrate {

/// Running backward product Phi(k, 0) = W_k ... W_1 with edge-union bookkeeping.
///
/// An improvement time is recorded at step t when the union of the graphs seen since
/// the previous improvement becomes connected; that union then restarts empty.
class ProductState {
public:
    explicit ProductState(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    const Eigen::MatrixXd& phi() const noexcept { return phi_; }
    /// Union of all graphs seen so far.
    Graph gamma_total() const;
    /// Union of the graphs seen since the last improvement.
    Graph gamma_since_last() const;
    const std::vector<std::size_t>& improvement_times() const noexcept { return improvements_; }
    std::size_t m_k() const noexcept { return improvements_.size(); }

    /// phi <- W phi. Throws InvalidInput on a size mismatch.
    void step(const StochasticMatrix& w);
    void step(const SparseWeights& w);

private:
    void record_graph(const std::vector<Edge>& edges);
    Graph graph_of(const std::vector<std::uint8_t>& adj) const;

    std::size_t n_;
    std::size_t k_ = 0;
    Eigen::MatrixXd phi_;
    Eigen::MatrixXd scratch_;
    std::vector<std::uint8_t> total_;
    std::vector<std::uint8_t> since_last_;
    std::vector<std::size_t> improvements_;
};

ProductState product_step(ProductState state, const StochasticMatrix& w);

/// ||phi - J||_2 for a doubly stochastic phi, from the top eigenvalue of phi^T phi - J.
double error_norm(const Eigen::MatrixXd& phi);
inline double error_norm(const ProductState& state) { return error_norm(state.phi()); }

struct Violation {
    std::string check;
    std::string detail;
};

/// Structural checks on Phi(k, 0) with s - t = k (all with relative slack 1e-9):
///   positive-entry   positive entries of phi >= delta^k
///   diagonal         diagonal of phi >= delta^k
///   gram-offdiag     positive off-diagonals of phi^T phi >= delta^2k
///   fiedler-bound    ||phi - J|| <= sqrt(1 - delta^2k * fiedler(union graph))
///   connectivity     ||phi - J|| < 1 exactly when the union graph is connected
///   path-bound       connected union: ||phi - J|| <= sqrt(1 - c delta^2k), c the path constant
///   improvement-bound  M_k >= 1: ||phi - J|| <= (1 - c delta^(2k/M_k))^(M_k/2)
std::vector<Violation> check_structural_invariants(const ProductState& state, double delta);

/// Monte-Carlo estimate of P(||Phi(k,0) - J|| >= epsilon) with a 95% Wilson interval.
struct TailEstimate {
    std::size_t k = 0;
    double epsilon = 1.0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

TailEstimate make_tail_estimate(std::size_t k, double epsilon, std::uint64_t trials, std::uint64_t hits);

struct SimulationOptions {
    /// 0 means hardware concurrency.
    unsigned threads = 1;
    /// For epsilon == 1, count disconnected edge unions instead of multiplying
    /// matrices (the two events coincide).
    bool graph_fast_path = true;
};

/// A trial counts as a hit when error_norm >= epsilon - 1e-9.
TailEstimate estimate_tail(const NetworkModel& model, std::size_t k, double epsilon, std::uint64_t trials,
                           std::uint64_t seed, const SimulationOptions& options = {});

/// Independent estimates for each k; trial t at list position j uses the stream
/// derived from (seed, k_j, t).
std::vector<TailEstimate> estimate_tail_series(const NetworkModel& model, const std::vector<std::size_t>& ks,
                                               double epsilon, std::uint64_t trials, std::uint64_t seed,
                                               const SimulationOptions& options = {});

struct RateFit {
    double rate = 0.0;       // -slope
    double std_error = 0.0;  // of the slope
    double intercept = 0.0;
    std::vector<std::size_t> used_k;
    std::vector<TailEstimate> points;
};

/// Weighted least squares of log p_hat on k over points with 0 < hits < trials,
/// weights n p / (1 - p). InsufficientData when fewer than 3 points are usable.
RateFit fit_rate(const std::vector<TailEstimate>& points);

RateFit estimate_rate_empirical(const NetworkModel& model, const std::vector<std::size_t>& ks, double epsilon,
                                std::uint64_t trials, std::uint64_t seed, const SimulationOptions& options = {});

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 20;

/// Exact P(union of k i.i.d. realized graphs is disconnected), by dynamic programming
/// over reachable edge unions (finite-support models) or per-edge inclusion
/// probabilities 1 - (1 - p_e)^k (link failure, |E| <= 20).
double exact_disconnect_probability(const NetworkModel& model, std::size_t k,
                                    std::size_t state_cap = kDefaultStateCap);

/// Values for k = 1 .. k_max.
std::vector<double> exact_disconnect_series(const NetworkModel& model, std::size_t k_max,
                                            std::size_t state_cap = kDefaultStateCap);

}  // namespace consrate
