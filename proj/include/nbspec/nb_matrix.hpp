#pragma once

// The non-backtracking matrix B, the orientation reversal P and the block
// decomposition of B^c after attaching a new node.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace nbspec {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// B_{k->l, i->j} = 1 iff j == k and i != l, indexed by OrientedEdgeIndex.
/// Dense storage for factorizations, plus an O(2m) adjacency-list product.
class NbMatrix {
  public:
    NbMatrix() = default;

    explicit NbMatrix(Graph g) : graph_(std::move(g)), edges_(graph_) {
        const std::size_t dim = edges_.size();
        dense_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t row = 0; row < dim; ++row) {
            const NodeId k = edges_.source(row);
            const NodeId l = edges_.target(row);
            for (NodeId i : graph_.neighbors(k)) {
                if (i == l) continue;
                dense_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(edges_.index(i, k))) = 1.0;
            }
        }
    }

    const Graph& graph() const noexcept { return graph_; }
    const OrientedEdgeIndex& edges() const noexcept { return edges_; }
    std::size_t dim() const noexcept { return edges_.size(); }

    const Eigen::MatrixXd& dense() const noexcept { return dense_; }
    IntMatrix integer() const { return dense_.cast<std::int64_t>(); }

    /// (Bv)_{k->l} = sum_{i ~ k} v_{i->k} - v_{l->k}.
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
        const std::size_t n = graph_.node_count();
        Eigen::VectorXd in_sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t e = 0; e < edges_.size(); ++e) in_sum[edges_.target(e)] += v[static_cast<Eigen::Index>(e)];
        Eigen::VectorXd out(v.size());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const auto ei = static_cast<Eigen::Index>(e);
            out[ei] = in_sum[edges_.source(e)] - v[static_cast<Eigen::Index>(edges_.reverse(e))];
        }
        return out;
    }

  private:
    Graph graph_;
    OrientedEdgeIndex edges_;
    Eigen::MatrixXd dense_;
};

inline NbMatrix build_nb(const Graph& g) { return NbMatrix(g); }

/// (Pv)_{k->l} = v_{l->k}. Stored as the pairing permutation.
class ReversalOperator {
  public:
    ReversalOperator() = default;
    explicit ReversalOperator(std::vector<std::size_t> pairing) : pairing_(std::move(pairing)) {}

    std::size_t size() const noexcept { return pairing_.size(); }
    std::size_t operator[](std::size_t e) const { return pairing_[e]; }
    const std::vector<std::size_t>& pairing() const noexcept { return pairing_; }

    template <typename Derived>
    auto apply(const Eigen::MatrixBase<Derived>& v) const {
        using Plain = typename Derived::PlainObject;
        Plain out(v.rows(), v.cols());
        for (std::size_t e = 0; e < pairing_.size(); ++e) {
            out.row(static_cast<Eigen::Index>(e)) = v.row(static_cast<Eigen::Index>(pairing_[e]));
        }
        return out;
    }

    Eigen::MatrixXd dense() const {
        const auto n = static_cast<Eigen::Index>(pairing_.size());
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t e = 0; e < pairing_.size(); ++e) p(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(pairing_[e])) = 1.0;
        return p;
    }

  private:
    std::vector<std::size_t> pairing_;
};

inline ReversalOperator build_reversal(const Graph& g) { return ReversalOperator(OrientedEdgeIndex(g).reversal()); }

/// Sorted, duplicate-free neighbour set; throws on unknown nodes.
inline std::vector<NodeId> normalize_neighbors(const Graph& g, std::span<const NodeId> neighbors) {
    std::vector<NodeId> out(neighbors.begin(), neighbors.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (NodeId v : out) {
        if (v >= g.node_count()) throw DomainError("unknown neighbour " + std::to_string(v));
    }
    return out;
}

/// X_{k->l, i->j} = a_ck a_cj (1 - delta_jk), on G's canonical indexing.
inline IntMatrix x_from_formula(const Graph& g, std::span<const NodeId> neighbors) {
    const auto nbrs = normalize_neighbors(g, neighbors);
    std::vector<bool> attached(g.node_count(), false);
    for (NodeId v : nbrs) attached[v] = true;
    const OrientedEdgeIndex idx(g);
    const auto dim = static_cast<Eigen::Index>(idx.size());
    IntMatrix x = IntMatrix::Zero(dim, dim);
    for (std::size_t row = 0; row < idx.size(); ++row) {
        const NodeId k = idx.source(row);
        if (!attached[k]) continue;
        for (std::size_t col = 0; col < idx.size(); ++col) {
            const NodeId j = idx.target(col);
            if (attached[j] && j != k) x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1;
        }
    }
    return x;
}

/// B^c = [[B, D], [E, F]] with G's 2m edges first and the 2d edges incident
/// to c last (j->c for each neighbour j, then c->j).
struct BlockDecomposition {
    Graph base;
    Graph extended;
    NodeId new_node = 0;
    std::vector<NodeId> neighbors;
    std::vector<std::size_t> layout;  // layout position -> canonical index in G^c

    IntMatrix b;
    IntMatrix d_block;
    IntMatrix e_block;
    IntMatrix f_block;
    IntMatrix x;

    std::size_t degree() const noexcept { return neighbors.size(); }

    IntMatrix reassembled() const {
        const auto m2 = b.rows();
        const auto d2 = f_block.rows();
        IntMatrix out(m2 + d2, m2 + d2);
        out.topLeftCorner(m2, m2) = b;
        out.topRightCorner(m2, d2) = d_block;
        out.bottomLeftCorner(d2, m2) = e_block;
        out.bottomRightCorner(d2, d2) = f_block;
        return out;
    }

    Eigen::MatrixXd x_real() const { return x.cast<double>(); }
};

inline BlockDecomposition block_decompose(const Graph& g, std::span<const NodeId> neighbors) {
    BlockDecomposition out;
    out.base = g;
    out.neighbors = normalize_neighbors(g, neighbors);
    if (out.neighbors.empty()) throw DomainError("block_decompose: neighbour set is empty");
    out.extended = add_node(g, out.neighbors);
    out.new_node = static_cast<NodeId>(g.node_count());

    const OrientedEdgeIndex base_idx(g);
    const NbMatrix bc(out.extended);
    const auto& ext_idx = bc.edges();
    const NodeId c = out.new_node;

    out.layout.reserve(ext_idx.size());
    for (std::size_t e = 0; e < base_idx.size(); ++e) out.layout.push_back(ext_idx.index(base_idx.source(e), base_idx.target(e)));
    for (NodeId j : out.neighbors) out.layout.push_back(ext_idx.index(j, c));
    for (NodeId j : out.neighbors) out.layout.push_back(ext_idx.index(c, j));

    const auto total = static_cast<Eigen::Index>(out.layout.size());
    IntMatrix full(total, total);
    for (Eigen::Index r = 0; r < total; ++r)
        for (Eigen::Index s = 0; s < total; ++s)
            full(r, s) = static_cast<std::int64_t>(bc.dense()(static_cast<Eigen::Index>(out.layout[static_cast<std::size_t>(r)]),
                                                            static_cast<Eigen::Index>(out.layout[static_cast<std::size_t>(s)])));

    const auto m2 = static_cast<Eigen::Index>(base_idx.size());
    const auto d2 = total - m2;
    out.b = full.topLeftCorner(m2, m2);
    out.d_block = full.topRightCorner(m2, d2);
    out.e_block = full.bottomLeftCorner(d2, m2);
    out.f_block = full.bottomRightCorner(d2, d2);

    if (out.b != NbMatrix(g).integer()) throw ConsistencyError("block_decompose: leading block differs from B of G");

    out.x = out.d_block * out.f_block * out.e_block;
    if (out.x != x_from_formula(g, out.neighbors)) throw ConsistencyError("block_decompose: DFE differs from the closed form of X");
    return out;
}

/// "row col value" triples, 0-based, row-major, nonzeros only.
template <typename Derived>
void write_coordinate_dump(std::ostream& out, const Eigen::MatrixBase<Derived>& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (m(r, c) != 0) out << r << ' ' << c << ' ' << m(r, c) << '\n';
}

}  // namespace nbspec
