#pragma once

// Upper bounds on the Perron shift and the centralities built on X.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "nb_matrix.hpp"
#include "spectra.hpp"

namespace nbspec {

struct BoundReport {
    NormOrder p = NormOrder::two;
    double lxr_norm = 0.0;
    double gamma = 0.0;
    double theorem2_bound = 0.0;
    std::int64_t x_degree = 0;
    double alpha11 = 0.0;
    double eps_approx = 0.0;
    double eps_actual = 0.0;
    bool prop1_holds = false;

    bool bound_holds(double slack = 1e-8) const { return eps_actual <= theorem2_bound + slack; }
};

/// L X R in the eigenbasis of `sys`; entry (i, j) is v_i^L X v_j^R.
inline Eigen::MatrixXcd lxr_matrix(const EigenSystem& sys, const Eigen::MatrixXd& x) {
    if (sys.near_defective) throw NumericalError("L X R refused: eigensystem is near-defective");
    if (x.rows() != static_cast<Eigen::Index>(sys.size())) throw DomainError("L X R: dimension mismatch");
    return sys.left * x.cast<Complex>() * sys.right;
}

inline double lxr_norm(const Eigen::MatrixXcd& lxr, NormOrder p) { return induced_norm(lxr, p); }

inline double lxr_norm(const EigenSystem& sys, const Eigen::MatrixXd& x, NormOrder p) {
    return induced_norm(lxr_matrix(sys, x), p);
}

/// max{ lxr / lambda1^2, sqrt(lxr / gamma) - lambda1 }, second branch clamped at 0.
inline double theorem2_bound(double lambda1, double gamma, double lxr) {
    if (!(lambda1 > 0.0)) throw DomainError("theorem2_bound: lambda1 must be positive");
    if (!(gamma > 0.0)) throw DomainError("theorem2_bound: gamma must be positive");
    if (lxr == 0.0) return 0.0;
    const double first = lxr / (lambda1 * lambda1);
    const double second = std::max(0.0, std::sqrt(lxr / gamma) - lambda1);
    return std::max(first, second);
}

/// (sum_j a_cj deg j)^2 - sum_j a_cj deg(j)^2 with degrees taken in g.
inline std::int64_t x_degree(const Graph& g, std::span<const NodeId> neighbors) {
    const auto nbrs = normalize_neighbors(g, neighbors);
    std::int64_t sum = 0;
    std::int64_t squares = 0;
    for (NodeId j : nbrs) {
        const auto d = static_cast<std::int64_t>(g.degree(j));
        sum += d;
        squares += d * d;
    }
    const std::int64_t closed = sum * sum - squares;
    if (closed != x_from_formula(g, nbrs).sum()) throw ConsistencyError("x_degree: closed form differs from the entry count of X");
    return closed;
}

inline double alpha11_centrality(const PerronPair& pp, const Eigen::MatrixXd& x) {
    if (pp.v_right.size() == 0) throw DomainError("alpha11: Perron pair unavailable");
    if (x.rows() != pp.v_right.size()) throw DomainError("alpha11: dimension mismatch");
    return pp.v_left.dot(x * pp.v_right);
}

/// Same quantity read off the (normalized) eigensystem: the real part of (LXR)_11.
inline double alpha11_centrality(const EigenSystem& sys, const Eigen::MatrixXd& x) {
    if (sys.size() == 0) throw DomainError("alpha11: eigensystem unavailable");
    const Complex a = sys.left.row(0) * x.cast<Complex>() * sys.right.col(0);
    return a.real();
}

inline double epsilon_approximation(double alpha11, double lambda1) {
    if (!(lambda1 > 0.0)) throw DomainError("epsilon_approximation: lambda1 must be positive");
    return alpha11 / (lambda1 * lambda1);
}

struct BoundInputs {
    double lambda1 = 0.0;
    double gamma = 0.0;
    std::int64_t x_degree = 0;
    double alpha11 = 0.0;
    double eps_actual = 0.0;
};

/// One report per norm order, all built from the same L X R.
inline std::vector<BoundReport> bound_reports(const Eigen::MatrixXcd& lxr, const BoundInputs& in,
                                              double prop1_slack = 1e-6) {
    const double two = lxr_norm(lxr, NormOrder::two);
    std::vector<BoundReport> out;
    for (NormOrder p : {NormOrder::one, NormOrder::two, NormOrder::infinity}) {
        BoundReport r;
        r.p = p;
        r.lxr_norm = p == NormOrder::two ? two : lxr_norm(lxr, p);
        r.gamma = in.gamma;
        r.theorem2_bound = theorem2_bound(in.lambda1, in.gamma, r.lxr_norm);
        r.x_degree = in.x_degree;
        r.alpha11 = in.alpha11;
        r.eps_approx = epsilon_approximation(in.alpha11, in.lambda1);
        r.eps_actual = in.eps_actual;
        r.prop1_holds = two <= static_cast<double>(in.x_degree) + prop1_slack;
        out.push_back(r);
    }
    return out;
}

}  // namespace nbspec
