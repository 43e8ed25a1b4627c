#include "consrate/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "consrate/error.hpp"
#include "consrate/parallel.hpp"
#include "consrate/rng.hpp"

namespace consrate {

namespace {

constexpr double kRelSlack = 1e-9;
constexpr double kNormSlack = 1e-9;
constexpr double kWilsonZ = 1.959963984540054;

bool adjacency_connected(std::size_t n, const std::vector<std::uint8_t>& adj) {
    if (n == 0) return false;
    std::vector<std::size_t> stack{0};
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < n; ++v) {
            if (adj[u * n + v] && !seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == n;
}

void apply_sparse(const SparseWeights& w, const Eigen::MatrixXd& phi, Eigen::MatrixXd& next) {
    for (std::size_t i = 0; i < w.diagonal.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        next.row(r) = w.diagonal[i] * phi.row(r);
    }
    for (std::size_t e = 0; e < w.edges.size(); ++e) {
        const auto u = static_cast<Eigen::Index>(w.edges[e].u);
        const auto v = static_cast<Eigen::Index>(w.edges[e].v);
        next.row(u) += w.weights[e] * phi.row(v);
        next.row(v) += w.weights[e] * phi.row(u);
    }
}

}  // namespace

ProductState::ProductState(std::size_t n)
    : n_(n),
      phi_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))),
      scratch_(phi_),
      total_(n * n, 0),
      since_last_(n * n, 0) {}

Graph ProductState::graph_of(const std::vector<std::uint8_t>& adj) const {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n_; ++i)
        for (NodeId j = i + 1; j < n_; ++j)
            if (adj[i * n_ + j]) edges.push_back({i, j});
    return Graph(n_, std::move(edges));
}

Graph ProductState::gamma_total() const { return graph_of(total_); }
Graph ProductState::gamma_since_last() const { return graph_of(since_last_); }

void ProductState::record_graph(const std::vector<Edge>& edges) {
    for (const Edge& e : edges) {
        for (auto* adj : {&total_, &since_last_}) {
            (*adj)[e.u * n_ + e.v] = 1;
            (*adj)[e.v * n_ + e.u] = 1;
        }
    }
    if (adjacency_connected(n_, since_last_)) {
        improvements_.push_back(k_);
        std::fill(since_last_.begin(), since_last_.end(), std::uint8_t{0});
    }
}

void ProductState::step(const StochasticMatrix& w) {
    if (w.n() != n_) throw InvalidInput("product_step: matrix size does not match the state");
    scratch_.noalias() = w.values() * phi_;
    phi_.swap(scratch_);
    ++k_;
    record_graph(w.induced_graph().edges());
}

void ProductState::step(const SparseWeights& w) {
    if (w.diagonal.size() != n_) throw InvalidInput("product_step: weights size does not match the state");
    apply_sparse(w, phi_, scratch_);
    std::vector<Edge> active;
    for (std::size_t e = 0; e < w.edges.size(); ++e)
        if (w.weights[e] > 0.0) active.push_back(w.edges[e]);
    phi_.swap(scratch_);
    ++k_;
    record_graph(active);
}

ProductState product_step(ProductState state, const StochasticMatrix& w) {
    state.step(w);
    return state;
}

double error_norm(const Eigen::MatrixXd& phi) {
    const Eigen::Index n = phi.rows();
    if (n == 0) return 0.0;
    Eigen::MatrixXd gram = phi.transpose() * phi;
    gram.array() -= 1.0 / static_cast<double>(n);
    const double top = symmetric_eigenvalues(gram)(n - 1);
    return std::sqrt(std::max(top, 0.0));
}

std::vector<Violation> check_structural_invariants(const ProductState& state, double delta) {
    std::vector<Violation> out;
    const std::size_t n = state.n();
    if (n < 2) return out;
    const auto& phi = state.phi();
    const double k = static_cast<double>(state.k());
    const double floor1 = std::pow(delta, k);
    const double floor2 = std::pow(delta, 2.0 * k);
    auto report = [&](const char* check, const std::string& detail) { out.push_back({check, detail}); };

    for (Eigen::Index i = 0; i < phi.rows(); ++i) {
        for (Eigen::Index j = 0; j < phi.cols(); ++j) {
            const double v = phi(i, j);
            if (v > 0.0 && v < floor1 * (1.0 - kRelSlack))
                report("positive-entry", "phi(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                             std::to_string(v) + " below delta^k");
        }
        if (phi(i, i) < floor1 * (1.0 - kRelSlack))
            report("diagonal", "phi(" + std::to_string(i) + "," + std::to_string(i) + ") below delta^k");
    }
    const Eigen::MatrixXd gram = phi.transpose() * phi;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
            if (i != j && gram(i, j) > 0.0 && gram(i, j) < floor2 * (1.0 - kRelSlack))
                report("gram-offdiag", "(phi^T phi)(" + std::to_string(i) + "," + std::to_string(j) + ") below delta^2k");

    const double norm = error_norm(phi);
    const Graph gamma = state.gamma_total();
    const bool connected = is_connected(gamma);
    const double fiedler = fiedler_value(gamma);
    const double fiedler_bound = std::sqrt(std::max(0.0, 1.0 - floor2 * fiedler));
    if (norm > fiedler_bound + kNormSlack)
        report("fiedler-bound", "norm " + std::to_string(norm) + " exceeds " + std::to_string(fiedler_bound));

    if (connected && !(norm < 1.0))
        report("connectivity", "union graph connected but norm = " + std::to_string(norm));
    if (!connected && norm < 1.0 - kNormSlack)
        report("connectivity", "union graph disconnected but norm = " + std::to_string(norm));

    const double c = path_fiedler_constant(n);
    if (connected) {
        const double path_bound = std::sqrt(std::max(0.0, 1.0 - c * floor2));
        if (norm > path_bound + kNormSlack)
            report("path-bound", "norm " + std::to_string(norm) + " exceeds " + std::to_string(path_bound));
    }
    const double m = static_cast<double>(state.m_k());
    if (m >= 1.0) {
        const double bound = std::pow(std::max(0.0, 1.0 - c * std::pow(delta, 2.0 * k / m)), m / 2.0);
        if (norm > bound + kNormSlack)
            report("improvement-bound", "norm " + std::to_string(norm) + " exceeds " + std::to_string(bound) +
                                            " with M_k = " + std::to_string(state.m_k()));
    }
    return out;
}

TailEstimate make_tail_estimate(std::size_t k, double epsilon, std::uint64_t trials, std::uint64_t hits) {
    TailEstimate t;
    t.k = k;
    t.epsilon = epsilon;
    t.trials = trials;
    t.hits = hits;
    if (trials == 0) {
        t.ci_high = 1.0;
        return t;
    }
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    t.p_hat = p;
    t.ci_low = std::clamp(centre - half, 0.0, p);
    t.ci_high = std::clamp(centre + half, p, 1.0);
    return t;
}

namespace {

struct TrialBuffers {
    std::uint64_t hits = 0;
    Eigen::MatrixXd phi;
    Eigen::MatrixXd next;
    SparseWeights weights;
};

bool masks_supported(const NetworkModel& model) {
    return model.base_graph().num_edges() <= 64 && model.n() <= 64;
}

std::uint64_t count_hits(const NetworkModel& model, std::size_t k, double epsilon, std::uint64_t trials,
                         std::uint64_t stream_seed, const SimulationOptions& options,
                         const std::optional<MaskConnectivity>& conn) {
    const auto n = static_cast<Eigen::Index>(model.n());
    const bool fast = options.graph_fast_path && epsilon == 1.0 && conn.has_value();
    const bool masks = masks_supported(model);

    auto make_acc = [&] {
        TrialBuffers b;
        if (!fast) {
            b.phi = Eigen::MatrixXd::Identity(n, n);
            b.next = b.phi;
        }
        return b;
    };
    auto body = [&](TrialBuffers& b, std::size_t trial) {
        Rng rng = make_stream(stream_seed, trial);
        if (fast) {
            std::uint64_t uni = 0;
            for (std::size_t t = 0; t < k; ++t) {
                uni |= model.sample_edge_mask(rng);
                if (conn->connected(uni)) return;
            }
            ++b.hits;
            return;
        }
        b.phi.setIdentity();
        for (std::size_t t = 0; t < k; ++t) {
            if (masks) {
                model.weights_for_mask(model.sample_edge_mask(rng), rng, b.weights);
                apply_sparse(b.weights, b.phi, b.next);
            } else {
                const Graph g = model.sample_graph(rng);
                b.next.noalias() = model.sample_matrix(g, rng).values() * b.phi;
            }
            b.phi.swap(b.next);
        }
        if (error_norm(b.phi) >= epsilon - kNormSlack) ++b.hits;
    };
    const auto accs = parallel_accumulate(static_cast<std::size_t>(trials), options.threads, make_acc, body);
    std::uint64_t hits = 0;
    for (const auto& a : accs) hits += a.hits;
    return hits;
}

void check_tail_args(double epsilon, std::uint64_t trials) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidInput("epsilon must lie in (0, 1]");
    if (trials == 0) throw InvalidInput("trials must be at least 1");
}

std::optional<MaskConnectivity> fast_path_connectivity(const NetworkModel& model, double epsilon,
                                                       const SimulationOptions& options) {
    if (!options.graph_fast_path || epsilon != 1.0 || !masks_supported(model)) return std::nullopt;
    return MaskConnectivity(model.base_graph());
}

}  // namespace

TailEstimate estimate_tail(const NetworkModel& model, std::size_t k, double epsilon, std::uint64_t trials,
                           std::uint64_t seed, const SimulationOptions& options) {
    return estimate_tail_series(model, {k}, epsilon, trials, seed, options).front();
}

std::vector<TailEstimate> estimate_tail_series(const NetworkModel& model, const std::vector<std::size_t>& ks,
                                               double epsilon, std::uint64_t trials, std::uint64_t seed,
                                               const SimulationOptions& options) {
    check_tail_args(epsilon, trials);
    const auto conn = fast_path_connectivity(model, epsilon, options);
    std::vector<TailEstimate> out;
    out.reserve(ks.size());
    for (std::size_t k : ks) {
        const std::uint64_t hits = count_hits(model, k, epsilon, trials, derive_seed(seed, k), options, conn);
        out.push_back(make_tail_estimate(k, epsilon, trials, hits));
    }
    return out;
}

RateFit fit_rate(const std::vector<TailEstimate>& points) {
    RateFit fit;
    fit.points = points;
    double sw = 0.0, swx = 0.0, swy = 0.0;
    std::vector<double> xs, ys, ws;
    for (const auto& p : points) {
        if (p.hits == 0 || p.hits >= p.trials) continue;
        const double var = (1.0 - p.p_hat) / (static_cast<double>(p.trials) * p.p_hat);
        const double w = 1.0 / var;
        xs.push_back(static_cast<double>(p.k));
        ys.push_back(std::log(p.p_hat));
        ws.push_back(w);
        sw += w;
        swx += w * xs.back();
        swy += w * ys.back();
        fit.used_k.push_back(p.k);
    }
    if (fit.used_k.size() < 3)
        throw InsufficientData("rate fit needs at least 3 values of k with 0 < hits < trials", fit.used_k);
    const double xbar = swx / sw;
    const double ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
        sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
    }
    if (sxx <= 0.0) throw InsufficientData("rate fit needs at least 3 distinct values of k", fit.used_k);
    const double slope = sxy / sxx;
    fit.rate = -slope;
    fit.std_error = std::sqrt(1.0 / sxx);
    fit.intercept = ybar - slope * xbar;
    return fit;
}

RateFit estimate_rate_empirical(const NetworkModel& model, const std::vector<std::size_t>& ks, double epsilon,
                                std::uint64_t trials, std::uint64_t seed, const SimulationOptions& options) {
    if (!std::is_sorted(ks.begin(), ks.end()) || std::adjacent_find(ks.begin(), ks.end()) != ks.end())
        throw InvalidInput("k list must be strictly increasing");
    return fit_rate(estimate_tail_series(model, ks, epsilon, trials, seed, options));
}

std::vector<double> exact_disconnect_series(const NetworkModel& model, std::size_t k_max, std::size_t state_cap) {
    std::vector<double> out;
    out.reserve(k_max);
    const Graph& base = model.base_graph();
    if (base.num_edges() > 64 || base.n() > 64)
        throw CapacityError("exact disconnection probability needs a base graph with <= 64 edges", 64);

    if (model.kind() == ModelKind::LinkFailure) {
        const std::size_t m = base.num_edges();
        if (m > 20 || (std::size_t{1} << m) > state_cap)
            throw CapacityError("exact link-failure disconnection over 2^" + std::to_string(m) + " edge sets",
                                state_cap);
        const MaskConnectivity conn(base);
        const auto& p = model.edge_probabilities();
        std::vector<double> prob;
        for (std::size_t k = 1; k <= k_max; ++k) {
            prob.assign(1, 1.0);
            for (std::size_t e = 0; e < m; ++e) {
                const double r = 1.0 - std::pow(1.0 - p[e], static_cast<double>(k));
                const std::size_t half = prob.size();
                prob.resize(2 * half);
                for (std::size_t s = 0; s < half; ++s) {
                    prob[s + half] = prob[s] * r;
                    prob[s] *= 1.0 - r;
                }
            }
            double total = 0.0;
            for (std::size_t s = 0; s < prob.size(); ++s)
                if (!conn.connected(s)) total += prob[s];
            out.push_back(total);
        }
        return out;
    }

    const auto support = model.finite_support();
    const MaskConnectivity conn(base);
    std::map<std::uint64_t, double> cur{{0, 1.0}};
    for (std::size_t k = 1; k <= k_max; ++k) {
        std::map<std::uint64_t, double> next;
        for (const auto& [uni, p] : cur) {
            for (const auto& [mask, q] : support) {
                if (q <= 0.0) continue;
                const std::uint64_t v = uni | mask;
                if (conn.connected(v)) continue;
                next[v] += p * q;
                if (next.size() > state_cap)
                    throw CapacityError("exact disconnection DP state space", state_cap);
            }
        }
        double total = 0.0;
        for (const auto& [uni, p] : next) total += p;
        out.push_back(total);
        cur = std::move(next);
    }
    return out;
}

double exact_disconnect_probability(const NetworkModel& model, std::size_t k, std::size_t state_cap) {
    if (k == 0) return model.n() >= 2 ? 1.0 : 0.0;
    return exact_disconnect_series(model, k, state_cap).back();
}

}  // namespace consrate
