#include "consrate/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

#include "consrate/error.hpp"

namespace consrate {

Edge make_edge(NodeId a, NodeId b) {
    if (a == b) throw InvalidInput("self-loop on node " + std::to_string(a));
    return a < b ? Edge{a, b} : Edge{b, a};
}

Graph::Graph(std::size_t n) : n_(n) {}

Graph::Graph(std::size_t n, std::vector<Edge> edges)
    : Graph(n, std::move(edges), std::vector<std::optional<double>>{}) {}

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::vector<std::optional<double>> attrs) : n_(n) {
    if (!attrs.empty() && attrs.size() != edges.size())
        throw InvalidInput("attribute count does not match edge count");
    if (attrs.empty()) attrs.assign(edges.size(), std::nullopt);

    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        Edge e = make_edge(edges[i].u, edges[i].v);
        if (e.v >= n) throw InvalidInput("edge node index out of range: " + std::to_string(e.v));
        if (attrs[i] && !(*attrs[i] >= 0.0))
            throw InvalidInput("edge attribute must be nonnegative");
        edges[i] = e;
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    edges_.reserve(edges.size());
    attrs_.reserve(edges.size());
    for (std::size_t idx : order) {
        if (!edges_.empty() && edges_.back() == edges[idx])
            throw InvalidInput("duplicate edge " + std::to_string(edges[idx].u) + "-" + std::to_string(edges[idx].v));
        edges_.push_back(edges[idx]);
        attrs_.push_back(attrs[idx]);
    }
}

std::optional<std::size_t> Graph::edge_index(NodeId a, NodeId b) const {
    if (a == b) return std::nullopt;
    const Edge e = a < b ? Edge{a, b} : Edge{b, a};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

bool Graph::has_edge(NodeId a, NodeId b) const { return edge_index(a, b).has_value(); }

std::optional<double> Graph::attribute(std::size_t edge_index) const { return attrs_.at(edge_index); }

bool Graph::fully_attributed() const {
    return std::all_of(attrs_.begin(), attrs_.end(), [](const auto& a) { return a.has_value(); });
}

std::vector<double> Graph::attributes() const {
    std::vector<double> out;
    out.reserve(attrs_.size());
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
        if (!attrs_[i])
            throw InvalidInput("edge " + std::to_string(edges_[i].u) + "-" + std::to_string(edges_[i].v) +
                               " has no attribute");
        out.push_back(*attrs_[i]);
    }
    return out;
}

Graph Graph::with_attributes(std::span<const double> values) const {
    if (values.size() != edges_.size()) throw InvalidInput("attribute count does not match edge count");
    std::vector<std::optional<double>> attrs(values.begin(), values.end());
    return Graph(n_, edges_, std::move(attrs));
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> deg(n_, 0);
    for (const Edge& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

std::size_t Graph::degree(NodeId i) const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [i](const Edge& e) { return e.u == i || e.v == i; }));
}

Graph Graph::subgraph(std::uint64_t edge_mask) const {
    if (edges_.size() > 64) throw InvalidInput("edge masks need at most 64 edges");
    std::vector<Edge> kept;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edge_mask >> i & 1U) kept.push_back(edges_[i]);
    return Graph(n_, std::move(kept));
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
}

bool is_connected(const Graph& g) {
    if (g.n() == 0) return false;
    UnionFind uf(g.n());
    for (const Edge& e : g.edges()) uf.unite(e.u, e.v);
    return uf.components() == 1;
}

MaskConnectivity::MaskConnectivity(const Graph& base) : n_(base.n()), edges_(base.edges()) {
    if (n_ > 64 || edges_.size() > 64)
        throw InvalidInput("mask connectivity needs at most 64 nodes and 64 edges");
    if (edges_.size() <= 20) {
        table_.resize(std::size_t{1} << edges_.size());
        for (std::size_t m = 0; m < table_.size(); ++m) table_[m] = search(m) ? 1 : 0;
    }
}

bool MaskConnectivity::connected(std::uint64_t mask) const {
    if (!table_.empty()) return table_[mask & (table_.size() - 1)] != 0;
    return search(mask);
}

bool MaskConnectivity::search(std::uint64_t mask) const {
    if (n_ == 0) return false;
    std::vector<std::uint64_t> adj(n_, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (!(mask >> e & 1U)) continue;
        adj[edges_[e].u] |= std::uint64_t{1} << edges_[e].v;
        adj[edges_[e].v] |= std::uint64_t{1} << edges_[e].u;
    }
    const std::uint64_t all = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    std::uint64_t seen = 1;
    std::uint64_t frontier = 1;
    while (frontier != 0) {
        std::uint64_t next = 0;
        for (std::uint64_t f = frontier; f != 0; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == all;
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
    UnionFind uf(g.n());
    for (const Edge& e : g.edges()) uf.unite(e.u, e.v);
    std::vector<std::vector<NodeId>> out;
    std::vector<std::size_t> slot(g.n(), g.n());
    for (NodeId i = 0; i < g.n(); ++i) {
        const std::size_t root = uf.find(i);
        if (slot[root] == g.n()) {
            slot[root] = out.size();
            out.emplace_back();
        }
        out[slot[root]].push_back(i);
    }
    return out;
}

Eigen::MatrixXd laplacian(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.n());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        const auto u = static_cast<Eigen::Index>(e.u);
        const auto v = static_cast<Eigen::Index>(e.v);
        lap(u, u) += 1.0;
        lap(v, v) += 1.0;
        lap(u, v) = -1.0;
        lap(v, u) = -1.0;
    }
    return lap;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double fiedler_value(const Graph& g) {
    if (g.n() < 2) throw InvalidInput("fiedler_value needs at least 2 nodes");
    const Eigen::VectorXd ev = symmetric_eigenvalues(laplacian(g));
    const double lambda = ev(1);
    return std::abs(lambda) <= kSpectralZero ? 0.0 : lambda;
}

double path_fiedler_constant(std::size_t n) {
    if (n < 2) throw InvalidInput("path_fiedler_constant needs n >= 2");
    return 2.0 * (1.0 - std::cos(std::numbers::pi / static_cast<double>(n)));
}

Graph supergraph(std::span<const Graph> graphs, std::size_t n) {
    std::vector<Edge> all;
    for (const Graph& g : graphs) {
        if (g.n() != n)
            throw InvalidInput("supergraph: graph has " + std::to_string(g.n()) + " nodes, expected " +
                               std::to_string(n));
        all.insert(all.end(), g.edges().begin(), g.edges().end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return Graph(n, std::move(all));
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Graph(n, std::move(e));
}

Graph cycle_graph(std::size_t n) {
    if (n < 3) throw InvalidInput("cycle needs at least 3 nodes");
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i) e.push_back(make_edge(i, (i + 1) % n));
    return Graph(n, std::move(e));
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
    return Graph(n, std::move(e));
}

Graph star_graph(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 1; i < n; ++i) e.push_back({0, i});
    return Graph(n, std::move(e));
}

Graph circulant_graph(std::size_t n, std::size_t d) {
    if (d < 1 || d >= n || (n * d) % 2 != 0)
        throw InvalidInput("no d-regular circulant graph for n=" + std::to_string(n) + ", d=" + std::to_string(d));
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i) {
        for (std::size_t s = 1; s <= d / 2; ++s) e.push_back(make_edge(i, (i + s) % n));
        // odd degree: add the antipodal chord once per pair
        if (d % 2 == 1 && i < n / 2) e.push_back(make_edge(i, i + n / 2));
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return Graph(n, std::move(e));
}

namespace {

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

Graph parse_graph(std::istream& in) {
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    std::vector<std::optional<double>> attrs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream fields(strip_comment(line));
        std::string first;
        if (!(fields >> first)) continue;
        auto fail = [&](const std::string& msg) {
            throw InvalidInput("graph line " + std::to_string(lineno) + ": " + msg);
        };
        if (!n) {
            std::size_t value = 0;
            if (first != "n" || !(fields >> value)) fail("expected header `n <N>`");
            n = value;
            std::string extra;
            if (fields >> extra) fail("trailing tokens after header");
            continue;
        }
        long long a = 0;
        long long b = 0;
        try {
            std::size_t used = 0;
            a = std::stoll(first, &used);
            if (used != first.size()) fail("bad node index '" + first + "'");
        } catch (const std::logic_error&) {
            fail("bad node index '" + first + "'");
        }
        if (!(fields >> b)) fail("expected `<i> <j> [attr]`");
        if (a < 0 || b < 0) fail("negative node index");
        std::optional<double> attr;
        double value = 0.0;
        if (fields >> value) attr = value;
        else if (!fields.eof()) fail("bad attribute");
        std::string extra;
        fields.clear();
        if (fields >> extra) fail("trailing tokens");
        edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
        attrs.push_back(attr);
    }
    if (!n) throw InvalidInput("graph file has no `n <N>` header");
    return Graph(*n, std::move(edges), std::move(attrs));
}

Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open graph file: " + path);
    return parse_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
    out << "n " << g.n() << '\n';
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        out << g.edge(i).u << ' ' << g.edge(i).v;
        if (auto a = g.attribute(i)) out << ' ' << std::setprecision(17) << *a;
        out << '\n';
    }
}

}  // namespace consrate
