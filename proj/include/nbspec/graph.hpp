#pragma once

// Undirected simple graphs, their oriented-edge indexing, ingestion,
// generation and the node addition/removal used by the perturbation code.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace nbspec {

/// Position of a node in the graph's node order.
using NodeId = std::uint32_t;
using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

class Graph {
  public:
    Graph() = default;

    /// Builds a graph over `labels.size()` nodes. Duplicate edges (in either
    /// orientation) collapse; self-loops and out-of-range endpoints throw.
    Graph(std::vector<std::string> labels, const EdgeList& edges) : labels_(std::move(labels)) {
        const std::size_t n = labels_.size();
        adj_.assign(n, {});
        index_.reserve(n);
        for (NodeId u = 0; u < n; ++u) {
            if (!index_.emplace(labels_[u], u).second) {
                throw InvalidGraph("duplicate node label '" + labels_[u] + "'");
            }
        }
        for (auto [u, v] : edges) {
            if (u >= n || v >= n) throw InvalidGraph("edge endpoint out of range");
            if (u == v) throw InvalidGraph("self-loop at node '" + labels_[u] + "'");
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        std::size_t degree_sum = 0;
        for (auto& nbrs : adj_) {
            std::sort(nbrs.begin(), nbrs.end());
            nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
            degree_sum += nbrs.size();
        }
        edge_count_ = degree_sum / 2;
    }

    /// Nodes labelled "0", "1", ..., "n-1".
    static Graph with_integer_labels(std::size_t n, const EdgeList& edges) {
        std::vector<std::string> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
        return Graph(std::move(labels), edges);
    }

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Neighbours sorted by node position.
    std::span<const NodeId> neighbors(NodeId u) const { return adj_.at(u); }
    std::size_t degree(NodeId u) const { return adj_.at(u).size(); }

    bool adjacent(NodeId u, NodeId v) const {
        const auto& nbrs = adj_.at(u);
        return std::binary_search(nbrs.begin(), nbrs.end(), v);
    }

    const std::string& label(NodeId u) const { return labels_.at(u); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    std::optional<NodeId> find(std::string_view label) const {
        auto it = index_.find(std::string(label));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Undirected edges as (u, v) with u < v, lexicographic.
    EdgeList edges() const {
        EdgeList out;
        out.reserve(edge_count_);
        for (NodeId u = 0; u < adj_.size(); ++u) {
            for (NodeId v : adj_[u]) {
                if (u < v) out.emplace_back(u, v);
            }
        }
        return out;
    }

    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> deg(adj_.size());
        for (std::size_t u = 0; u < adj_.size(); ++u) deg[u] = adj_[u].size();
        return deg;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.labels_ == b.labels_ && a.adj_ == b.adj_;
    }

  private:
    std::vector<std::string> labels_;
    std::vector<std::vector<NodeId>> adj_;
    std::unordered_map<std::string, NodeId> index_;
    std::size_t edge_count_ = 0;
};

struct OrientedEdge {
    NodeId source;
    NodeId target;

    friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
};

/// Bijection between the 2m oriented edges and 0..2m-1, ordered
/// lexicographically by (source position, target position).
class OrientedEdgeIndex {
  public:
    OrientedEdgeIndex() = default;

    explicit OrientedEdgeIndex(const Graph& g) {
        const std::size_t n = g.node_count();
        offsets_.assign(n + 1, 0);
        for (NodeId u = 0; u < n; ++u) offsets_[u + 1] = offsets_[u] + g.degree(u);
        const std::size_t total = offsets_[n];
        sources_.resize(total);
        targets_.resize(total);
        for (NodeId u = 0; u < n; ++u) {
            std::size_t e = offsets_[u];
            for (NodeId v : g.neighbors(u)) {
                sources_[e] = u;
                targets_[e] = v;
                ++e;
            }
        }
        reverse_.resize(total);
        for (std::size_t e = 0; e < total; ++e) reverse_[e] = index(targets_[e], sources_[e]);
    }

    std::size_t size() const noexcept { return sources_.size(); }

    std::optional<std::size_t> find(NodeId u, NodeId v) const {
        if (u + 1 >= offsets_.size()) return std::nullopt;
        auto first = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
        auto last = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
        auto it = std::lower_bound(first, last, v);
        if (it == last || *it != v) return std::nullopt;
        return static_cast<std::size_t>(it - targets_.begin());
    }

    std::size_t index(NodeId u, NodeId v) const {
        auto e = find(u, v);
        if (!e) throw DomainError("no oriented edge " + std::to_string(u) + "->" + std::to_string(v));
        return *e;
    }

    OrientedEdge edge(std::size_t e) const { return {sources_.at(e), targets_.at(e)}; }
    NodeId source(std::size_t e) const { return sources_[e]; }
    NodeId target(std::size_t e) const { return targets_[e]; }
    std::size_t reverse(std::size_t e) const { return reverse_.at(e); }

    /// Out-edges of u occupy [out_begin(u), out_end(u)).
    std::size_t out_begin(NodeId u) const { return offsets_.at(u); }
    std::size_t out_end(NodeId u) const { return offsets_.at(u + 1); }

    const std::vector<std::size_t>& reversal() const noexcept { return reverse_; }

  private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> sources_;
    std::vector<NodeId> targets_;
    std::vector<std::size_t> reverse_;
};

struct ValidationReport {
    bool connected = false;
    std::size_t min_degree = 0;
    bool is_cycle = false;
    bool perron_applicable = false;
};

namespace detail {

inline std::vector<std::size_t> component_labels(const Graph& g, std::size_t& count) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> comp(n, n);
    count = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != n) continue;
        comp[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u)) {
                if (comp[v] == n) {
                    comp[v] = count;
                    stack.push_back(v);
                }
            }
        }
        ++count;
    }
    return comp;
}

/// Subgraph induced by the nodes with keep[u] true, node order preserved.
inline Graph induced(const Graph& g, const std::vector<bool>& keep) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> remap(n, 0);
    std::vector<std::string> labels;
    for (NodeId u = 0; u < n; ++u) {
        if (keep[u]) {
            remap[u] = static_cast<NodeId>(labels.size());
            labels.push_back(g.label(u));
        }
    }
    EdgeList edges;
    for (auto [u, v] : g.edges()) {
        if (keep[u] && keep[v]) edges.emplace_back(remap[u], remap[v]);
    }
    return Graph(std::move(labels), edges);
}

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline bool is_connected(const Graph& g) {
    if (g.node_count() == 0) return false;
    std::size_t count = 0;
    detail::component_labels(g, count);
    return count == 1;
}

inline ValidationReport validate(const Graph& g) {
    ValidationReport r;
    r.connected = is_connected(g);
    if (g.node_count() > 0) {
        r.min_degree = g.degree(0);
        for (NodeId u = 1; u < g.node_count(); ++u) r.min_degree = std::min(r.min_degree, g.degree(u));
    }
    bool all_two = g.node_count() > 0;
    for (NodeId u = 0; u < g.node_count(); ++u) all_two = all_two && g.degree(u) == 2;
    r.is_cycle = r.connected && all_two;
    r.perron_applicable = r.connected && r.min_degree >= 2 && !r.is_cycle;
    return r;
}

inline bool is_bipartite(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<int> side(n, -1);
    std::queue<NodeId> q;
    for (NodeId s = 0; s < n; ++s) {
        if (side[s] != -1) continue;
        side[s] = 0;
        q.push(s);
        while (!q.empty()) {
            NodeId u = q.front();
            q.pop();
            for (NodeId v : g.neighbors(u)) {
                if (side[v] == -1) {
                    side[v] = 1 - side[u];
                    q.push(v);
                } else if (side[v] == side[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Edge-list text format
// ---------------------------------------------------------------------------

/// Reads "u v" lines. '#' starts a comment, blank lines are ignored and node
/// tokens are mapped to dense ids in first-appearance order.
inline Graph load_edge_list(std::istream& in) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> ids;
    EdgeList edges;
    auto id_of = [&](const std::string& token) {
        auto [it, inserted] = ids.emplace(token, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(token);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = line;
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = detail::trim(body);
        if (body.empty()) continue;

        std::istringstream tokens{std::string(body)};
        std::string a, b, extra;
        if (!(tokens >> a >> b) || (tokens >> extra)) {
            throw ParseError(lineno, "expected two node tokens, got '" + std::string(body) + "'");
        }
        if (a == b) throw ParseError(lineno, "self-loop at node '" + a + "'");
        const NodeId u = id_of(a);
        const NodeId v = id_of(b);
        edges.emplace_back(u, v);
    }
    return Graph(std::move(labels), edges);
}

inline Graph load_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_edge_list(in);
}

inline Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open '" + path + "'");
    return load_edge_list(in);
}

/// Writes one "u v" line per undirected edge using node labels. Isolated
/// nodes are not representable in this format and are dropped.
inline void write_edge_list(std::ostream& out, const Graph& g) {
    for (auto [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

// ---------------------------------------------------------------------------
// Node addition / removal
// ---------------------------------------------------------------------------

/// Returns G^c: g plus a new last node joined to `neighbors`. The default
/// label is the smallest non-negative integer not already used as a label.
inline Graph add_node(const Graph& g, std::span<const NodeId> neighbors,
                      std::optional<std::string> label = std::nullopt) {
    if (neighbors.empty()) throw DomainError("add_node: neighbour set is empty");
    const std::size_t n = g.node_count();
    for (NodeId v : neighbors) {
        if (v >= n) throw DomainError("add_node: unknown neighbour " + std::to_string(v));
    }
    std::string name;
    if (label) {
        name = *label;
        if (g.find(name)) throw DomainError("add_node: label '" + name + "' already in use");
    } else {
        for (std::size_t k = n;; ++k) {
            name = std::to_string(k);
            if (!g.find(name)) break;
        }
    }
    auto labels = g.labels();
    labels.push_back(name);
    EdgeList edges = g.edges();
    const auto c = static_cast<NodeId>(n);
    for (NodeId v : neighbors) edges.emplace_back(v, c);
    return Graph(std::move(labels), edges);
}

inline Graph remove_node(const Graph& g, NodeId c) {
    if (c >= g.node_count()) throw DomainError("remove_node: unknown node " + std::to_string(c));
    std::vector<bool> keep(g.node_count(), true);
    keep[c] = false;
    return detail::induced(g, keep);
}

/// Largest connected component of the 2-core (ties: the component containing
/// the earliest node). Node order is preserved.
inline Graph prune_two_core(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> deg = g.degrees();
    std::vector<bool> keep(n, true);
    std::vector<NodeId> stack;
    for (NodeId u = 0; u < n; ++u) {
        if (deg[u] < 2) {
            keep[u] = false;
            stack.push_back(u);
        }
    }
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : g.neighbors(u)) {
            if (keep[v] && --deg[v] < 2) {
                keep[v] = false;
                stack.push_back(v);
            }
        }
    }
    Graph core = detail::induced(g, keep);
    std::size_t count = 0;
    auto comp = detail::component_labels(core, count);
    if (count <= 1) return core;
    std::vector<std::size_t> sizes(count, 0);
    for (auto c : comp) ++sizes[c];
    const auto best = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<bool> in_best(core.node_count());
    for (std::size_t u = 0; u < core.node_count(); ++u) in_best[u] = comp[u] == best;
    return detail::induced(core, in_best);
}

/// Relabels node positions: node u of g becomes node perm[u] of the result.
inline Graph permute_nodes(const Graph& g, std::span<const NodeId> perm) {
    const std::size_t n = g.node_count();
    if (perm.size() != n) throw DomainError("permute_nodes: permutation has wrong size");
    std::vector<std::string> labels(n);
    std::vector<bool> seen(n, false);
    for (NodeId u = 0; u < n; ++u) {
        if (perm[u] >= n || seen[perm[u]]) throw DomainError("permute_nodes: not a permutation");
        seen[perm[u]] = true;
        labels[perm[u]] = g.label(u);
    }
    EdgeList edges;
    for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
    return Graph(std::move(labels), edges);
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline Graph cycle_graph(std::size_t k) {
    if (k < 3) throw DomainError("cycle(k) needs k >= 3");
    EdgeList edges;
    for (std::size_t i = 0; i < k; ++i) edges.emplace_back(NodeId(i), NodeId((i + 1) % k));
    return Graph::with_integer_labels(k, edges);
}

inline Graph complete_graph(std::size_t k) {
    if (k < 2) throw DomainError("complete(k) needs k >= 2");
    EdgeList edges;
    for (NodeId i = 0; i < k; ++i)
        for (NodeId j = i + 1; j < k; ++j) edges.emplace_back(i, j);
    return Graph::with_integer_labels(k, edges);
}

/// Outer 5-cycle 0..4, spokes i -- i+5, inner pentagram i+5 -- (i+2 mod 5)+5.
inline Graph petersen_graph() {
    EdgeList edges;
    for (NodeId i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(i, i + 5);
        edges.emplace_back(i + 5, (i + 2) % 5 + 5);
    }
    return Graph::with_integer_labels(10, edges);
}

inline Graph path_graph(std::size_t k) {
    if (k < 1) throw DomainError("path(k) needs k >= 1");
    EdgeList edges;
    for (NodeId i = 0; i + 1 < k; ++i) edges.emplace_back(i, i + 1);
    return Graph::with_integer_labels(k, edges);
}

/// G(n, p): every pair (i < j), visited lexicographically, is kept with probability p.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) throw DomainError("er: n must be >= 2");
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("er: p must lie in (0, 1]");
    SplitMix64 rng(seed);
    EdgeList edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (rng.uniform() < p) edges.emplace_back(i, j);
    return Graph::with_integer_labels(n, edges);
}

/// Preferential attachment seeded with a (k+1)-clique; every later node
/// attaches to k distinct existing nodes chosen with probability
/// proportional to degree. Minimum degree is k.
inline Graph barabasi_albert(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 1) throw DomainError("ba: attachment count must be >= 1");
    if (n < k + 1) throw DomainError("ba: n must exceed the attachment count");
    SplitMix64 rng(seed);
    EdgeList edges;
    std::vector<NodeId> endpoints;  // each node repeated deg times
    for (NodeId i = 0; i <= k; ++i) {
        for (NodeId j = i + 1; j <= k; ++j) {
            edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }
    if (endpoints.empty()) endpoints.push_back(0);  // k == 1: single seed node
    for (auto v = static_cast<NodeId>(k + 1); v < n; ++v) {
        std::vector<NodeId> targets;
        while (targets.size() < k) {
            NodeId t = endpoints[rng.below(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        std::sort(targets.begin(), targets.end());
        for (NodeId t : targets) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return Graph::with_integer_labels(n, edges);
}

enum class GeneratorKind { erdos_renyi, barabasi_albert, named };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::named;
    std::string name;            // named: "cycle", "complete", "petersen", "path"
    std::size_t n = 0;           // er/ba node count, or the k of cycle(k)/complete(k)
    double p = 0.0;              // er edge probability
    std::size_t attachments = 0; // ba
    std::uint64_t seed = 0;
};

inline Graph generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorKind::erdos_renyi:
            return erdos_renyi(spec.n, spec.p, spec.seed);
        case GeneratorKind::barabasi_albert:
            return barabasi_albert(spec.n, spec.attachments, spec.seed);
        case GeneratorKind::named:
            if (spec.name == "cycle") return cycle_graph(spec.n);
            if (spec.name == "complete") return complete_graph(spec.n);
            if (spec.name == "path") return path_graph(spec.n);
            if (spec.name == "petersen") return petersen_graph();
            throw DomainError("unknown named graph '" + spec.name + "'");
    }
    throw DomainError("unknown generator kind");
}

/// Parses "complete:4", "cycle:5", "path:3" or "petersen".
inline Graph named_graph(std::string_view spec) {
    GeneratorSpec g;
    const auto colon = spec.find(':');
    g.name = std::string(spec.substr(0, colon));
    if (colon != std::string_view::npos) {
        const std::string arg(spec.substr(colon + 1));
        std::size_t used = 0;
        long long k = -1;
        try {
            k = std::stoll(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != arg.size() || k < 0) throw DomainError("bad size in named graph '" + std::string(spec) + "'");
        g.n = static_cast<std::size_t>(k);
    } else if (g.name != "petersen") {
        throw DomainError("named graph '" + g.name + "' needs a size, e.g. " + g.name + ":4");
    }
    return generate(g);
}

}  // namespace nbspec
