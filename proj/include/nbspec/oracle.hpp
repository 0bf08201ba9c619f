#pragma once

// Brute-force ground truth. Nothing here reuses the matrix builders from
// nb_matrix.hpp: oriented edges, B, B^c and X are rebuilt from adjacency.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace nbspec::oracle {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct WalkQuery {
    OrientedEdge start;
    OrientedEdge end;
    std::size_t length = 1;  // number of oriented edges in the walk
};

inline constexpr std::uint64_t walk_budget = 10'000'000;

namespace detail {

// Oriented edges in (source position, target position) order.
inline std::vector<OrientedEdge> oriented_edges(const Graph& g) {
    std::vector<OrientedEdge> out;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u)) out.push_back({u, v});
    std::sort(out.begin(), out.end(), [](const OrientedEdge& a, const OrientedEdge& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    return out;
}

inline std::map<std::pair<NodeId, NodeId>, std::size_t> edge_positions(const std::vector<OrientedEdge>& edges) {
    std::map<std::pair<NodeId, NodeId>, std::size_t> pos;
    for (std::size_t i = 0; i < edges.size(); ++i) pos[{edges[i].source, edges[i].target}] = i;
    return pos;
}

// Extends a walk whose last oriented edge is prev -> at, `remaining` more steps.
template <typename Visit>
void extend(const Graph& g, NodeId prev, NodeId at, std::size_t remaining, std::uint64_t& states, Visit&& visit) {
    if (++states > walk_budget) throw BudgetExceeded("NB walk enumeration exceeded 1e7 states");
    if (remaining == 0) {
        visit(prev, at);
        return;
    }
    for (NodeId next : g.neighbors(at)) {
        if (next == prev) continue;
        extend(g, at, next, remaining - 1, states, visit);
    }
}

inline Eigen::MatrixXd dense_nb(const Graph& g, const std::vector<OrientedEdge>& edges) {
    const auto pos = edge_positions(edges);
    const auto n = static_cast<Eigen::Index>(edges.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t r = 0; r < edges.size(); ++r) {
        const auto [k, l] = edges[r];
        for (NodeId i : g.neighbors(k))
            if (i != l) b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(pos.at({i, k}))) = 1.0;
    }
    return b;
}

}  // namespace detail

/// Number of NB walks of q.length oriented edges from q.start to q.end.
inline std::uint64_t count_nb_walks(const Graph& g, const WalkQuery& q) {
    if (q.length < 1) throw DomainError("walk length must be >= 1");
    if (!g.adjacent(q.start.source, q.start.target) || !g.adjacent(q.end.source, q.end.target))
        throw DomainError("walk endpoints must be edges of the graph");
    std::uint64_t states = 0;
    std::uint64_t count = 0;
    detail::extend(g, q.start.source, q.start.target, q.length - 1, states, [&](NodeId a, NodeId b) {
        if (a == q.end.source && b == q.end.target) ++count;
    });
    return count;
}

/// Entry (end, start) counts NB walks of `length` oriented edges, in the
/// canonical oriented-edge order.
inline IntMat walk_count_matrix(const Graph& g, std::size_t length) {
    if (length < 1) throw DomainError("walk length must be >= 1");
    const auto edges = detail::oriented_edges(g);
    const auto pos = detail::edge_positions(edges);
    const auto n = static_cast<Eigen::Index>(edges.size());
    IntMat out = IntMat::Zero(n, n);
    std::uint64_t states = 0;
    for (std::size_t s = 0; s < edges.size(); ++s) {
        detail::extend(g, edges[s].source, edges[s].target, length - 1, states, [&](NodeId a, NodeId b) {
            ++out(static_cast<Eigen::Index>(pos.at({a, b})), static_cast<Eigen::Index>(s));
        });
    }
    return out;
}

struct WalkReport {
    bool pass = true;
    std::size_t r_max = 0;
    std::size_t entries_checked = 0;
    std::size_t mismatches = 0;
    std::int64_t max_abs_difference = 0;
};

/// (B^r)_{k->l, i->j} against brute-force counts of walks of length r + 1.
/// `b` is the matrix under test, indexed canonically.
inline WalkReport verify_walk_powers(const Graph& g, const IntMat& b, std::size_t r_max) {
    if (2 * g.edge_count() > 60) throw DomainError("verify_walk_powers: requires 2m <= 60");
    if (r_max > 5) throw DomainError("verify_walk_powers: requires r_max <= 5");
    if (b.rows() != static_cast<Eigen::Index>(2 * g.edge_count())) throw DomainError("verify_walk_powers: size mismatch");
    WalkReport report;
    report.r_max = r_max;
    IntMat power = IntMat::Identity(b.rows(), b.cols());
    for (std::size_t r = 1; r <= r_max; ++r) {
        power = power * b;
        const IntMat counts = walk_count_matrix(g, r + 1);
        const IntMat diff = power - counts;
        report.entries_checked += static_cast<std::size_t>(diff.size());
        for (Eigen::Index i = 0; i < diff.size(); ++i) {
            const std::int64_t v = diff.data()[i] < 0 ? -diff.data()[i] : diff.data()[i];
            if (v != 0) ++report.mismatches;
            report.max_abs_difference = std::max(report.max_abs_difference, v);
        }
    }
    report.pass = report.mismatches == 0;
    return report;
}

struct SchurSample {
    double t = 0.0;
    bool skipped = false;
    std::string note;
    double schur_residual = 0.0;     // det(B^c - tI) vs t^{2d} det(B - tI + X/t^2)
    double factored_residual = 0.0;  // ... vs t^{2d} det(B - tI) det(I + Y(t) X / t^2)
};

struct SchurReport {
    double max_residual = 0.0;
    std::size_t used = 0;
    std::vector<SchurSample> samples;
};

/// X_{k->l, i->j} = a_ck a_cj (1 - delta_jk), from adjacency alone.
inline Eigen::MatrixXd x_matrix(const Graph& g, std::span<const NodeId> neighbors) {
    std::vector<bool> attached(g.node_count(), false);
    for (NodeId v : neighbors) {
        if (v >= g.node_count()) throw DomainError("unknown neighbour");
        attached[v] = true;
    }
    const auto edges = detail::oriented_edges(g);
    const auto n = static_cast<Eigen::Index>(edges.size());
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const NodeId k = edges[static_cast<std::size_t>(r)].source;
            const NodeId j = edges[static_cast<std::size_t>(c)].target;
            if (attached[k] && attached[j] && j != k) x(r, c) = 1.0;
        }
    return x;
}

inline SchurReport verify_schur(const Graph& g, std::span<const NodeId> neighbors, const std::vector<double>& t_samples,
                                double min_pivot_ratio = 1e-12) {
    std::vector<NodeId> nbrs(neighbors.begin(), neighbors.end());
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    if (nbrs.empty()) throw DomainError("verify_schur: empty neighbour set");

    // G^c built by hand: the new node is last.
    EdgeList ext_edges = g.edges();
    const auto c = static_cast<NodeId>(g.node_count());
    for (NodeId v : nbrs) ext_edges.emplace_back(v, c);
    const Graph gc = Graph::with_integer_labels(g.node_count() + 1, ext_edges);

    const Eigen::MatrixXd b = detail::dense_nb(g, detail::oriented_edges(g));
    const Eigen::MatrixXd bc = detail::dense_nb(gc, detail::oriented_edges(gc));
    const Eigen::MatrixXd x = x_matrix(g, nbrs);
    const auto n = b.rows();
    const auto nc = bc.rows();
    const auto two_d = static_cast<long long>(2 * nbrs.size());

    SchurReport report;
    for (double t : t_samples) {
        SchurSample s;
        s.t = t;
        if (t == 0.0) {
            s.skipped = true;
            s.note = "t = 0";
            report.samples.push_back(s);
            continue;
        }
        double ratio = 0.0;
        const Eigen::MatrixXd shifted = b - t * Eigen::MatrixXd::Identity(n, n);
        const LogDet det_shifted = log_det(shifted, &ratio);
        if (ratio < min_pivot_ratio) {
            s.skipped = true;
            s.note = "t too close to an eigenvalue of B";
            report.samples.push_back(s);
            continue;
        }
        const LogDet lhs = log_det(Eigen::MatrixXd(bc - t * Eigen::MatrixXd::Identity(nc, nc)));
        const LogDet tpow = LogDet::of_scalar(t).pow(two_d);
        const LogDet schur = tpow * log_det(Eigen::MatrixXd(shifted + x / (t * t)));
        const Eigen::MatrixXd yx = shifted.partialPivLu().solve(x);
        const LogDet factored = tpow * det_shifted * log_det(Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n) + yx / (t * t)));
        s.schur_residual = relative_difference(lhs, schur);
        s.factored_residual = relative_difference(lhs, factored);
        report.max_residual = std::max({report.max_residual, s.schur_residual, s.factored_residual});
        ++report.used;
        report.samples.push_back(s);
    }
    return report;
}

struct TakagiReport {
    bool pass = false;
    double singular_value = 0.0;  // largest singular value
    double ascent_max = 0.0;      // best Re(x^T M x) found by restarts
    double eigen_max = 0.0;       // largest eigenvalue of the real representation
    std::size_t restarts = 0;
};

/// max over unit x of Re(x^T M x) against the largest singular value of a
/// complex symmetric M. With M = U + iV and x = a + ib the objective is the
/// quadratic form of S = [[U, -V], [-V, -U]] on (a, b).
inline TakagiReport verify_takagi_identity(const Eigen::MatrixXcd& m, std::uint64_t seed = 1, std::size_t restarts = 200,
                                           double tol = 1e-6) {
    if (m.rows() != m.cols()) throw DomainError("takagi: matrix is not square");
    if (m.rows() > 40) throw DomainError("takagi: dimension above 40");
    if (max_abs(Eigen::MatrixXcd(m - m.transpose())) > 1e-8) throw DomainError("takagi: matrix is not complex symmetric");
    const auto n = m.rows();
    TakagiReport report;
    report.restarts = restarts;
    if (n == 0) {
        report.pass = true;
        return report;
    }
    const Eigen::MatrixXd u = m.real();
    const Eigen::MatrixXd v = m.imag();
    Eigen::MatrixXd s(2 * n, 2 * n);
    s << u, -v, -v, -u;
    s = 0.5 * (s + s.transpose());

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    report.singular_value = svd.singularValues()(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    report.eigen_max = es.eigenvalues().maxCoeff();

    // Steepest ascent with exact line search: Rayleigh-Ritz on span{z, grad}.
    SplitMix64 rng(seed);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        Eigen::VectorXd z(2 * n);
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
        z.normalize();
        double rho = z.dot(s * z);
        for (int it = 0; it < 2000; ++it) {
            const Eigen::VectorXd sz = s * z;
            rho = z.dot(sz);
            Eigen::VectorXd grad = sz - rho * z;
            const double gn = grad.norm();
            if (gn <= 1e-13 * std::max(1.0, std::abs(rho))) break;
            grad /= gn;
            const double a = rho;
            const double b = grad.dot(sz);
            const double c = grad.dot(s * grad);
            // largest eigenpair of [[a, b], [b, c]]
            const double mid = 0.5 * (a + c);
            const double rad = std::hypot(0.5 * (a - c), b);
            const double top = mid + rad;
            Eigen::Vector2d w = std::abs(b) > 0.0 ? Eigen::Vector2d(b, top - a) : Eigen::Vector2d(a >= c ? 1.0 : 0.0, a >= c ? 0.0 : 1.0);
            w.normalize();
            z = w[0] * z + w[1] * grad;
            z.normalize();
        }
        best = std::max(best, z.dot(s * z));
    }
    report.ascent_max = best;
    const double scale = std::max(1.0, report.singular_value);
    report.pass = std::abs(report.singular_value - report.ascent_max) <= tol * scale &&
                  std::abs(report.singular_value - report.eigen_max) <= tol * scale;
    return report;
}

}  // namespace nbspec::oracle
