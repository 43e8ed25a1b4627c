#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "consrate/graph.hpp"
#include "consrate/models.hpp"
#include "consrate/rng.hpp"

namespace consrate {

/// Log-likelihood ratio of N(m, sigma2) against N(0, sigma2) at y.
double llr(double y, double m, double sigma2);

/// x_k = W ((k-1)/k x_{k-1} + L / k), for k >= 1.
Eigen::VectorXd detector_step(const Eigen::VectorXd& x, const Eigen::MatrixXd& w, const Eigen::VectorXd& innovations,
                              std::size_t k);
Eigen::VectorXd detector_step(const Eigen::VectorXd& x, const StochasticMatrix& w,
                              const Eigen::VectorXd& innovations, std::size_t k);

/// Closed form of the recursion after k = ws.size() steps:
/// x_k = (1/k) sum_t W_k ... W_t L_t.
Eigen::VectorXd detector_unwound(const std::vector<Eigen::MatrixXd>& ws, const std::vector<Eigen::VectorXd>& innovations);

/// (n - 1) n m^2 / (8 sigma2).
double optimality_threshold_gaussian(std::size_t n, double m, double sigma2);

enum class Hypothesis { H0, H1 };

struct DetectionConfig {
    NetworkModel model;
    double m = 0.0;
    double sigma2 = 1.0;
    std::size_t horizon = 1;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    Hypothesis truth = Hypothesis::H1;
    /// Average the error over both hypotheses (equal priors) instead of using `truth`.
    bool average_hypotheses = false;
    unsigned threads = 1;
};

/// Per-step error estimates; index k - 1 holds step k.
struct DetectionTrace {
    std::size_t n = 0;
    std::size_t horizon = 0;
    std::uint64_t trials = 0;
    std::vector<double> worst_error;
    std::vector<double> worst_ci_low;
    std::vector<double> worst_ci_high;
    std::vector<std::size_t> worst_sensor;
    /// sensor_error(i, k - 1).
    Eigen::MatrixXd sensor_error;

    /// First step k whose worst-sensor error is <= level.
    std::optional<std::size_t> first_step_below(double level) const;
};

/// Monte-Carlo run of the detector with decision "x_i > 0 accepts H1".
/// The model must be edge-mask capable (base graph with <= 64 edges).
DetectionTrace run_detection(const DetectionConfig& config);

/// Random geometric network on the unit square: n uniform points joined by their
/// `num_edges` shortest pairwise links, resampled until connected. Edge attributes
/// hold the link lengths.
struct GeometricNetwork {
    Graph graph;
    std::vector<std::array<double, 2>> positions;
    std::size_t attempts = 0;
};

GeometricNetwork random_geometric_network(std::size_t n, std::size_t num_edges, std::uint64_t seed,
                                          std::size_t max_attempts = 100000);

}  // namespace consrate
