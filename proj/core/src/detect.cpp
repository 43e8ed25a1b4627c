#include "consrate/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "consrate/error.hpp"
#include "consrate/parallel.hpp"
#include "consrate/simulate.hpp"

namespace consrate {

double llr(double y, double m, double sigma2) {
    if (!(sigma2 > 0.0)) throw InvalidInput("sigma2 must be positive");
    return (m / sigma2) * y - m * m / (2.0 * sigma2);
}

Eigen::VectorXd detector_step(const Eigen::VectorXd& x, const Eigen::MatrixXd& w, const Eigen::VectorXd& innovations,
                              std::size_t k) {
    if (k < 1) throw InvalidInput("detector_step: k must be at least 1");
    if (x.size() != innovations.size() || w.rows() != x.size() || w.cols() != x.size())
        throw InvalidInput("detector_step: dimension mismatch");
    const double kk = static_cast<double>(k);
    return w * (((kk - 1.0) / kk) * x + innovations / kk);
}

Eigen::VectorXd detector_step(const Eigen::VectorXd& x, const StochasticMatrix& w,
                              const Eigen::VectorXd& innovations, std::size_t k) {
    return detector_step(x, w.values(), innovations, k);
}

Eigen::VectorXd detector_unwound(const std::vector<Eigen::MatrixXd>& ws, const std::vector<Eigen::VectorXd>& innovations) {
    if (ws.empty() || ws.size() != innovations.size()) throw InvalidInput("detector_unwound: need one innovation per step");
    const Eigen::Index n = innovations.front().size();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    // sum_t Phi(k, t-1) L_t, accumulated from the last step backwards
    Eigen::MatrixXd tail = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t t = ws.size(); t-- > 0;) {
        tail = tail * ws[t];
        sum += tail * innovations[t];
    }
    return sum / static_cast<double>(ws.size());
}

double optimality_threshold_gaussian(std::size_t n, double m, double sigma2) {
    if (!(sigma2 > 0.0)) throw InvalidInput("sigma2 must be positive");
    const double nn = static_cast<double>(n);
    return (nn - 1.0) * nn * m * m / (8.0 * sigma2);
}

std::optional<std::size_t> DetectionTrace::first_step_below(double level) const {
    for (std::size_t k = 0; k < worst_error.size(); ++k)
        if (worst_error[k] <= level) return k + 1;
    return std::nullopt;
}

namespace {

struct ErrorCounts {
    std::vector<std::uint32_t> counts;  // counts[(k - 1) * n + i]
    Eigen::VectorXd x, v, next;
    SparseWeights weights;
};

std::vector<std::uint32_t> simulate_errors(const DetectionConfig& cfg, Hypothesis truth, std::uint64_t seed) {
    const std::size_t n = cfg.model.n();
    const std::size_t horizon = cfg.horizon;
    const double mean = truth == Hypothesis::H1 ? cfg.m : 0.0;
    const double sigma = std::sqrt(cfg.sigma2);
    const double gain = cfg.m / cfg.sigma2;
    const double offset = cfg.m * cfg.m / (2.0 * cfg.sigma2);

    auto make_acc = [&] {
        ErrorCounts a;
        a.counts.assign(n * horizon, 0);
        a.x.resize(static_cast<Eigen::Index>(n));
        a.v = a.x;
        a.next = a.x;
        return a;
    };
    auto body = [&](ErrorCounts& a, std::size_t trial) {
        Rng rng = make_stream(seed, trial);
        std::normal_distribution<double> noise(0.0, 1.0);
        a.x.setZero();
        for (std::size_t k = 1; k <= horizon; ++k) {
            cfg.model.weights_for_mask(cfg.model.sample_edge_mask(rng), rng, a.weights);
            const double kk = static_cast<double>(k);
            for (std::size_t j = 0; j < n; ++j) {
                const double y = mean + sigma * noise(rng);
                const auto jj = static_cast<Eigen::Index>(j);
                a.v(jj) = ((kk - 1.0) / kk) * a.x(jj) + (gain * y - offset) / kk;
            }
            const SparseWeights& w = a.weights;
            for (std::size_t i = 0; i < n; ++i) a.next(static_cast<Eigen::Index>(i)) = w.diagonal[i] * a.v(static_cast<Eigen::Index>(i));
            for (std::size_t e = 0; e < w.edges.size(); ++e) {
                const auto u = static_cast<Eigen::Index>(w.edges[e].u);
                const auto vv = static_cast<Eigen::Index>(w.edges[e].v);
                a.next(u) += w.weights[e] * a.v(vv);
                a.next(vv) += w.weights[e] * a.v(u);
            }
            a.x.swap(a.next);
            std::uint32_t* row = a.counts.data() + (k - 1) * n;
            for (std::size_t i = 0; i < n; ++i) {
                const double xi = a.x(static_cast<Eigen::Index>(i));
                const bool wrong = truth == Hypothesis::H1 ? !(xi > 0.0) : xi > 0.0;
                row[i] += wrong ? 1U : 0U;
            }
        }
    };
    auto accs = parallel_accumulate(static_cast<std::size_t>(cfg.trials), cfg.threads, make_acc, body);
    std::vector<std::uint32_t> total(n * horizon, 0);
    for (const auto& a : accs)
        for (std::size_t s = 0; s < total.size(); ++s) total[s] += a.counts[s];
    return total;
}

}  // namespace

DetectionTrace run_detection(const DetectionConfig& cfg) {
    if (!(cfg.sigma2 > 0.0)) throw InvalidInput("detection: sigma2 must be positive");
    if (cfg.horizon < 1) throw InvalidInput("detection: horizon must be at least 1");
    if (cfg.trials < 1) throw InvalidInput("detection: trials must be at least 1");
    if (cfg.trials > std::numeric_limits<std::uint32_t>::max()) throw InvalidInput("detection: too many trials");

    const std::size_t n = cfg.model.n();
    DetectionTrace tr;
    tr.n = n;
    tr.horizon = cfg.horizon;
    tr.trials = cfg.trials;
    tr.sensor_error = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cfg.horizon));

    std::vector<std::vector<std::uint32_t>> runs;
    if (cfg.average_hypotheses) {
        runs.push_back(simulate_errors(cfg, Hypothesis::H0, derive_seed(cfg.seed, 0)));
        runs.push_back(simulate_errors(cfg, Hypothesis::H1, derive_seed(cfg.seed, 1)));
    } else {
        const std::uint64_t stream = cfg.truth == Hypothesis::H1 ? 1 : 0;
        runs.push_back(simulate_errors(cfg, cfg.truth, derive_seed(cfg.seed, stream)));
    }

    const double trials = static_cast<double>(cfg.trials);
    for (std::size_t k = 0; k < cfg.horizon; ++k) {
        std::size_t worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = 0.0;
            for (const auto& r : runs) e += static_cast<double>(r[k * n + i]) / trials;
            e /= static_cast<double>(runs.size());
            tr.sensor_error(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = e;
            if (e > tr.sensor_error(static_cast<Eigen::Index>(worst), static_cast<Eigen::Index>(k))) worst = i;
        }
        double lo = 0.0, hi = 0.0;
        for (const auto& r : runs) {
            const TailEstimate t = make_tail_estimate(k + 1, 1.0, cfg.trials, r[k * n + worst]);
            lo += t.ci_low;
            hi += t.ci_high;
        }
        tr.worst_sensor.push_back(worst);
        tr.worst_error.push_back(tr.sensor_error(static_cast<Eigen::Index>(worst), static_cast<Eigen::Index>(k)));
        tr.worst_ci_low.push_back(lo / static_cast<double>(runs.size()));
        tr.worst_ci_high.push_back(hi / static_cast<double>(runs.size()));
    }
    return tr;
}

GeometricNetwork random_geometric_network(std::size_t n, std::size_t num_edges, std::uint64_t seed,
                                          std::size_t max_attempts) {
    if (n < 2) throw InvalidInput("geometric network needs at least 2 nodes");
    if (num_edges + 1 < n || num_edges > n * (n - 1) / 2)
        throw InvalidInput("geometric network: cannot be connected with " + std::to_string(num_edges) + " edges");
    struct Pair {
        double d;
        NodeId u, v;
    };
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        Rng rng = make_stream(seed, attempt);
        std::vector<std::array<double, 2>> pos(n);
        for (auto& p : pos) {
            p[0] = uniform01(rng);
            p[1] = uniform01(rng);
        }
        std::vector<Pair> pairs;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j)
                pairs.push_back({std::hypot(pos[i][0] - pos[j][0], pos[i][1] - pos[j][1]), i, j});
        std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
        std::vector<Edge> edges;
        std::vector<std::optional<double>> attrs;
        for (std::size_t e = 0; e < num_edges; ++e) {
            edges.push_back({pairs[e].u, pairs[e].v});
            attrs.push_back(pairs[e].d);
        }
        Graph g(n, std::move(edges), std::move(attrs));
        if (!is_connected(g)) continue;
        return GeometricNetwork{std::move(g), std::move(pos), attempt};
    }
    throw CapacityError("no connected geometric network found", max_attempts);
}

}  // namespace consrate
