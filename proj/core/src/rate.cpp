#include "consrate/rate.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "consrate/error.hpp"
#include "consrate/mincut.hpp"

namespace consrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_regular(std::size_t n, std::size_t d) {
    if (d < 2 || d + 1 > n || (n * d) % 2 != 0)
        throw InvalidInput("no d-regular graph with 2 <= d <= n-1 for n=" + std::to_string(n) +
                           ", d=" + std::to_string(d));
}

}  // namespace

RateResult gossip_rate(const Graph& g, std::span<const double> p) {
    if (p.size() != g.num_edges()) throw InvalidInput("gossip_rate: one probability per edge required");
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("gossip_rate: probabilities must lie in [0, 1]");
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("gossip_rate: probabilities sum to " + std::to_string(total));

    CutResult cut = stoer_wagner(g, p);
    double p_max = 1.0 - cut.value;
    if (p_max < 1e-12) p_max = 0.0;
    RateResult r = rate_from_p_max(p_max, RateMethod::MinCut);
    r.cut = std::move(cut);
    return r;
}

RateResult link_failure_rate(const Graph& g, std::span<const double> p) {
    if (p.size() != g.num_edges()) throw InvalidInput("link_failure_rate: one probability per edge required");
    std::vector<double> costs(p.size());
    for (std::size_t e = 0; e < p.size(); ++e) {
        if (!(p[e] >= 0.0 && p[e] <= 1.0)) throw InvalidInput("link_failure_rate: probabilities must lie in [0, 1]");
        costs[e] = p[e] == 1.0 ? kInf : -std::log1p(-p[e]);
    }
    CutResult cut = stoer_wagner(g, costs);
    RateResult r;
    r.method = RateMethod::MinCut;
    r.rate = cut.value;
    r.p_max = std::isinf(cut.value) ? 0.0 : std::exp(-cut.value);
    r.cut = std::move(cut);
    return r;
}

RateResult regular_gossip_rate(std::size_t n, std::size_t d) {
    check_regular(n, d);
    return rate_from_p_max(1.0 - 2.0 / static_cast<double>(n), RateMethod::ClosedForm);
}

RateResult regular_link_failure_rate(std::size_t n, std::size_t d, double p) {
    check_regular(n, d);
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("regular_link_failure_rate: p must lie in [0, 1]");
    RateResult r;
    r.method = RateMethod::ClosedForm;
    if (p == 1.0) {
        r.rate = kInf;
        r.p_max = 0.0;
        r.warnings.push_back("p = 1: links never fail, every realization is the full connected graph");
        return r;
    }
    r.rate = -static_cast<double>(d) * std::log1p(-p);
    if (r.rate == 0.0) r.rate = 0.0;
    r.p_max = std::pow(1.0 - p, static_cast<double>(d));
    return r;
}

RateResult model_rate(const NetworkModel& model, std::size_t cap) {
    switch (model.kind()) {
        case ModelKind::Gossip: return gossip_rate(model.base_graph(), model.edge_probabilities());
        case ModelKind::LinkFailure: return link_failure_rate(model.base_graph(), model.edge_probabilities());
        default: return p_max_brute(model, cap);
    }
}

}  // namespace consrate
