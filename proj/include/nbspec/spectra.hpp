#pragma once

// Spectral computations on B: the Perron pair by power iteration, the full
// eigensystem, the Ihara cross-check, bilinear normalization and the +/-1
// eigenspace checks.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "nb_matrix.hpp"
#include "rng.hpp"

namespace nbspec {

struct PerronPair {
    double lambda1 = 0.0;
    Eigen::VectorXd v_right;
    Eigen::VectorXd v_left;
    std::size_t iterations = 0;
    double residual = 0.0;
};

namespace detail {

struct PowerResult {
    double value = 0.0;
    Eigen::VectorXd vector;
    std::size_t iterations = 0;
    double residual = 0.0;
};

// Power iteration on B + I from the all-ones vector. The estimate is the
// P-Rayleigh quotient (Pv)^T B v / (Pv)^T v, which is quadratically accurate
// because PB is symmetric.
inline PowerResult power_iteration(const NbMatrix& nb, const Tolerances& tol) {
    const auto dim = static_cast<Eigen::Index>(nb.dim());
    if (dim == 0) throw DomainError("power iteration on an empty matrix");
    const auto& rev = nb.edges().reversal();
    auto p_dot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        double s = 0.0;
        for (Eigen::Index e = 0; e < dim; ++e) s += a[static_cast<Eigen::Index>(rev[static_cast<std::size_t>(e)])] * b[e];
        return s;
    };

    Eigen::VectorXd v = Eigen::VectorXd::Ones(dim);
    v /= v.norm();
    double previous = std::numeric_limits<double>::quiet_NaN();
    PowerResult out;
    for (std::size_t it = 1; it <= tol.power_max_iterations; ++it) {
        const Eigen::VectorXd bv = nb.apply(v);
        const double denom = p_dot(v, v);
        const double rq = denom != 0.0 ? p_dot(v, bv) / denom : 0.0;
        const double scale = std::max(1.0, std::abs(rq));
        const double residual = (bv - rq * v).cwiseAbs().maxCoeff() / (v.cwiseAbs().maxCoeff() * scale);
        out = {rq, v, it, residual};
        if (std::isfinite(previous) && std::abs(rq - previous) <= tol.power_rayleigh * scale &&
            residual <= tol.power_residual)
            return out;
        previous = rq;
        Eigen::VectorXd next = bv + v;
        const double norm = next.norm();
        if (norm == 0.0 || !std::isfinite(norm)) throw NumericalError("power iteration collapsed");
        v = next / norm;
    }
    throw ConvergenceError("power iteration did not converge in " + std::to_string(tol.power_max_iterations) + " steps",
                           out.residual);
}

}  // namespace detail

/// Largest real eigenvalue of B by power iteration, without applicability checks.
inline double spectral_radius(const NbMatrix& nb, const Tolerances& tol = {}) {
    return detail::power_iteration(nb, tol).value;
}

inline PerronPair perron(const NbMatrix& nb, const Tolerances& tol = {}) {
    const auto report = validate(nb.graph());
    if (!report.perron_applicable) {
        throw NotApplicable("Perron pair requires a connected non-cycle graph with minimum degree >= 2");
    }
    auto power = detail::power_iteration(nb, tol);
    PerronPair out;
    out.lambda1 = power.value;
    out.iterations = power.iterations;
    out.residual = power.residual;
    out.v_right = power.vector;
    if (out.v_right.sum() < 0.0) out.v_right = -out.v_right;
    if (out.v_right.minCoeff() <= 0.0) throw NumericalError("Perron vector is not strictly positive");
    const auto& rev = nb.edges().reversal();
    Eigen::VectorXd pv(out.v_right.size());
    for (std::size_t e = 0; e < rev.size(); ++e) pv[static_cast<Eigen::Index>(e)] = out.v_right[static_cast<Eigen::Index>(rev[e])];
    out.v_left = pv / pv.dot(out.v_right);
    return out;
}

/// A group of numerically coincident eigenvalues sharing one eigenspace basis.
struct EigenCluster {
    Complex value;
    std::vector<std::size_t> members;  // positions in EigenSystem::eigenvalues
    bool from_null_space = false;
    double kernel_residual = 0.0;  // max |(B - cI) v| over the basis
    bool defective = false;
};

struct EigenSystem {
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd right;  // columns are right eigenvectors
    Eigen::MatrixXcd left;   // rows are left eigenvectors, left * right = I
    std::vector<EigenCluster> clusters;

    double eigen_residual = 0.0;    // max |BR - R Lambda|
    double inverse_residual = 0.0;  // max |LR - I|
    double residual_diag = 0.0;
    double p_residual = std::numeric_limits<double>::quiet_NaN();  // max |R^T P R - I|
    bool near_defective = false;
    bool p_normalized = false;

    std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
    Complex lambda(std::size_t i) const { return eigenvalues[static_cast<Eigen::Index>(i)]; }
    std::vector<Complex> values() const { return to_vector(eigenvalues); }
};

namespace detail {

inline void refresh_residuals(EigenSystem& sys, const Eigen::MatrixXd& b) {
    const Eigen::MatrixXcd br = b.cast<Complex>() * sys.right;
    const Eigen::MatrixXcd rl = sys.right * sys.eigenvalues.asDiagonal();
    sys.eigen_residual = max_abs(br - rl);
    const auto n = sys.right.rows();
    sys.inverse_residual = max_abs(sys.left * sys.right - Eigen::MatrixXcd::Identity(n, n));
    sys.residual_diag = std::max(sys.eigen_residual, sys.inverse_residual);
}

// Orthonormal basis of the k-dimensional null space of B - cI, from a
// rank-revealing QR of (B - cI)^H: its trailing Q columns span the kernel.
// Eigen 3.4.0's BDCSVD is avoided; it hits an internal index assertion on
// these highly degenerate matrices.
template <typename Matrix>
Eigen::MatrixXcd kernel_basis(const Matrix& m, std::size_t k, double& residual, double& scale) {
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::ColPivHouseholderQR<Matrix> qr(m.adjoint());
    const Matrix q = qr.householderQ();
    const Matrix basis = q.rightCols(kk);
    residual = (m * basis).colwise().norm().maxCoeff();
    scale = std::abs(qr.matrixQR()(0, 0));
    return basis.template cast<Complex>();
}

inline Eigen::MatrixXcd null_space(const Eigen::MatrixXd& b, Complex c, std::size_t k, double& residual,
                                   double& scale) {
    const auto n = b.rows();
    if (c.imag() == 0.0) {
        const Eigen::MatrixXd m = b - c.real() * Eigen::MatrixXd::Identity(n, n);
        return kernel_basis(m, k, residual, scale);
    }
    const Eigen::MatrixXcd m = b.cast<Complex>() - c * Eigen::MatrixXcd::Identity(n, n);
    return kernel_basis(m, k, residual, scale);
}

}  // namespace detail

/// Complete eigendecomposition of B. Simple eigenvalues keep the vectors of
/// the QR-based solver; clusters and +/-1 get a null-space basis.
inline EigenSystem full_eigensystem(const NbMatrix& nb, const Tolerances& tol = {}) {
    const Eigen::MatrixXd& b = nb.dense();
    const auto n = b.rows();
    EigenSystem sys;
    if (n == 0) return sys;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(b, true);
    if (solver.info() != Eigen::Success) throw NumericalError("nonsymmetric eigensolver failed");
    const Eigen::VectorXcd raw = solver.eigenvalues();
    const Eigen::MatrixXcd raw_vectors = solver.eigenvectors();

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
        return eigen_order(raw[static_cast<Eigen::Index>(a)], raw[static_cast<Eigen::Index>(c)]);
    });

    // Group coincident eigenvalues; members keep their sorted positions.
    std::vector<bool> used(order.size(), false);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (used[i]) continue;
        const Complex anchor = raw[static_cast<Eigen::Index>(order[i])];
        EigenCluster cl;
        Complex sum{};
        for (std::size_t j = i; j < order.size(); ++j) {
            if (used[j]) continue;
            const Complex z = raw[static_cast<Eigen::Index>(order[j])];
            if (std::abs(z - anchor) < tol.cluster) {
                used[j] = true;
                cl.members.push_back(j);
                sum += z;
            }
        }
        cl.value = sum / static_cast<double>(cl.members.size());
        if (std::abs(cl.value.imag()) < tol.cluster && raw[static_cast<Eigen::Index>(order[i])].imag() == 0.0) cl.value.imag(0.0);
        if (std::abs(cl.value - 1.0) < tol.cluster) cl.value = 1.0;
        if (std::abs(cl.value + 1.0) < tol.cluster) cl.value = -1.0;
        sys.clusters.push_back(std::move(cl));
    }

    sys.eigenvalues.resize(n);
    sys.right.resize(n, n);
    for (auto& cl : sys.clusters) {
        const bool unit = cl.value == Complex{1.0, 0.0} || cl.value == Complex{-1.0, 0.0};
        if (cl.members.size() == 1 && !unit) {
            const std::size_t pos = cl.members.front();
            Eigen::VectorXcd v = raw_vectors.col(static_cast<Eigen::Index>(order[pos]));
            v /= v.norm();
            sys.right.col(static_cast<Eigen::Index>(pos)) = v;
            sys.eigenvalues[static_cast<Eigen::Index>(pos)] = raw[static_cast<Eigen::Index>(order[pos])];
            cl.value = sys.eigenvalues[static_cast<Eigen::Index>(pos)];
            continue;
        }
        double largest = 0.0;
        const Eigen::MatrixXcd basis = detail::null_space(b, cl.value, cl.members.size(), cl.kernel_residual, largest);
        cl.from_null_space = true;
        cl.defective = cl.kernel_residual > tol.near_defective * std::max(1.0, largest);
        for (std::size_t q = 0; q < cl.members.size(); ++q) {
            const auto pos = static_cast<Eigen::Index>(cl.members[q]);
            sys.right.col(pos) = basis.col(static_cast<Eigen::Index>(q));
            sys.eigenvalues[pos] = cl.value;
        }
    }

    // Cluster averaging and snapping can perturb the order; sort once more.
    std::vector<std::size_t> final_order(static_cast<std::size_t>(n));
    std::iota(final_order.begin(), final_order.end(), std::size_t{0});
    std::stable_sort(final_order.begin(), final_order.end(), [&](std::size_t a, std::size_t c) {
        return eigen_order(sys.eigenvalues[static_cast<Eigen::Index>(a)], sys.eigenvalues[static_cast<Eigen::Index>(c)]);
    });
    std::vector<std::size_t> where(final_order.size());
    const Eigen::VectorXcd unsorted_values = sys.eigenvalues;
    const Eigen::MatrixXcd unsorted_right = sys.right;
    for (std::size_t k = 0; k < final_order.size(); ++k) {
        where[final_order[k]] = k;
        sys.eigenvalues[static_cast<Eigen::Index>(k)] = unsorted_values[static_cast<Eigen::Index>(final_order[k])];
        sys.right.col(static_cast<Eigen::Index>(k)) = unsorted_right.col(static_cast<Eigen::Index>(final_order[k]));
    }
    for (auto& cl : sys.clusters)
        for (auto& pos : cl.members) pos = where[pos];

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.right);
    sys.left = lu.inverse();
    detail::refresh_residuals(sys, b);
    sys.near_defective = sys.inverse_residual > tol.near_defective ||
                         std::any_of(sys.clusters.begin(), sys.clusters.end(), [](const EigenCluster& c) { return c.defective; });
    return sys;
}

/// Roots of det(lambda^2 I - lambda A + D - I), from the 2n x 2n companion
/// matrix [[A, -(D - I)], [I, 0]].
inline std::vector<Complex> ihara_spectrum(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    if (n == 0) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto ui = static_cast<Eigen::Index>(u);
        for (NodeId v : g.neighbors(u)) comp(ui, static_cast<Eigen::Index>(v)) = 1.0;
        comp(ui, n + ui) = -(static_cast<double>(g.degree(u)) - 1.0);
        comp(n + ui, ui) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
    if (solver.info() != Eigen::Success) throw NumericalError("companion eigensolver failed");
    auto values = to_vector(solver.eigenvalues());
    sort_eigenvalues(values);
    return values;
}

struct IharaSample {
    double t = 0.0;
    double residual = 0.0;
};

struct IharaReport {
    double max_residual = 0.0;
    std::vector<IharaSample> samples;
};

/// Uniform samples in [0.1, 0.9 / lambda1]; if that range is empty the lower
/// end drops to 0.1 / lambda1.
inline std::vector<double> default_ihara_samples(const Graph& g, std::size_t count, std::uint64_t seed,
                                                 const Tolerances& tol = {}) {
    const double rho = std::max(1.0, spectral_radius(NbMatrix(g), tol));
    double hi = 0.9 / rho;
    double lo = 0.1;
    if (lo >= hi) lo = 0.1 / rho;
    SplitMix64 rng(seed);
    std::vector<double> out(count);
    for (auto& t : out) t = rng.uniform(lo, hi);
    return out;
}

/// det(I - tB) against (1 - t^2)^(m-n) det(I - tA + t^2 (D - I)).
inline IharaReport verify_ihara(const Graph& g, const std::vector<double>& t_samples) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    const long long excess = static_cast<long long>(g.edge_count()) - static_cast<long long>(g.node_count());
    if (excess < 0) throw DomainError("verify_ihara requires m >= n");
    const NbMatrix nb(g);
    const Eigen::MatrixXd& b = nb.dense();
    const auto dim = b.rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd dm1(n);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.neighbors(u)) a(u, v) = 1.0;
        dm1[u] = static_cast<double>(g.degree(u)) - 1.0;
    }
    IharaReport report;
    for (double t : t_samples) {
        const LogDet lhs = log_det(Eigen::MatrixXd(Eigen::MatrixXd::Identity(dim, dim) - t * b));
        Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n) - t * a;
        q.diagonal() += t * t * dm1;
        LogDet rhs = log_det(q);
        if (excess > 0) rhs *= LogDet::of_scalar(1.0 - t * t).pow(excess);
        const double r = relative_difference(lhs, rhs);
        report.samples.push_back({t, r});
        report.max_residual = std::max(report.max_residual, r);
    }
    return report;
}

namespace detail {

inline Complex bilinear(const ReversalOperator& p, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    Complex s{};
    for (std::size_t e = 0; e < p.size(); ++e) s += x[static_cast<Eigen::Index>(e)] * y[static_cast<Eigen::Index>(p[e])];
    return s;
}

// Gram-Schmidt under <x, y> = x^T P y. Picks the least isotropic vector
// first; when every remaining vector is isotropic it combines a pair with a
// nonzero cross term.
inline Eigen::MatrixXcd bilinear_gram_schmidt(const ReversalOperator& p, Eigen::MatrixXcd basis, Complex value,
                                              double iso) {
    std::vector<Eigen::VectorXcd> pending;
    for (Eigen::Index q = 0; q < basis.cols(); ++q) pending.push_back(basis.col(q));
    Eigen::MatrixXcd out(basis.rows(), basis.cols());
    Eigen::Index filled = 0;
    while (!pending.empty()) {
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t q = 0; q < pending.size(); ++q) {
            const double s = std::abs(bilinear(p, pending[q], pending[q]));
            if (s > best_norm) {
                best_norm = s;
                best = q;
            }
        }
        if (best_norm < iso) {
            double cross = 0.0;
            std::size_t a = 0;
            std::size_t c = 0;
            for (std::size_t i = 0; i < pending.size(); ++i)
                for (std::size_t j = i + 1; j < pending.size(); ++j) {
                    const double s = std::abs(bilinear(p, pending[i], pending[j]));
                    if (s > cross) {
                        cross = s;
                        a = i;
                        c = j;
                    }
                }
            if (cross < iso) throw NormalizationFailure("isotropic eigenspace under x^T P y", value.real(), value.imag());
            pending[a] += pending[c];
            best = a;
        }
        Eigen::VectorXcd v = pending[best];
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
        const Complex s = bilinear(p, v, v);
        if (std::abs(s) < iso) throw NormalizationFailure("isotropic vector in Gram-Schmidt", value.real(), value.imag());
        v /= std::sqrt(s);
        for (auto& x : pending) x -= bilinear(p, v, x) * v;
        out.col(filled++) = v;
    }
    return out;
}

}  // namespace detail

/// Rescales R so that R^T P R = I and sets L = R^T P.
inline EigenSystem p_normalize(const EigenSystem& sys, const ReversalOperator& p, const Tolerances& tol = {}) {
    if (sys.near_defective) throw NumericalError("p_normalize: eigensystem is near-defective");
    if (p.size() != sys.size()) throw DomainError("p_normalize: size mismatch");
    EigenSystem out = sys;
    const double exact = 1e-10;
    for (const auto& cl : sys.clusters) {
        const auto k = static_cast<Eigen::Index>(cl.members.size());
        Eigen::MatrixXcd basis(sys.right.rows(), k);
        for (Eigen::Index q = 0; q < k; ++q) basis.col(q) = sys.right.col(static_cast<Eigen::Index>(cl.members[static_cast<std::size_t>(q)]));

        Eigen::MatrixXcd normalized;
        if (k == 1 && cl.value != Complex{1.0, 0.0} && cl.value != Complex{-1.0, 0.0}) {
            const Eigen::VectorXcd v = basis.col(0);
            const Complex s = detail::bilinear(p, v, v);
            if (std::abs(s) < tol.p_normalization) throw NormalizationFailure("v^T P v vanishes", cl.value.real(), cl.value.imag());
            normalized = v / std::sqrt(s);
        } else if (cl.value == Complex{-1.0, 0.0} && max_abs(p.apply(basis) - basis) <= exact) {
            normalized = basis;
        } else if (cl.value == Complex{1.0, 0.0} && max_abs(p.apply(basis) + basis) <= exact) {
            normalized = Complex{0.0, 1.0} * basis;
        } else {
            normalized = detail::bilinear_gram_schmidt(p, basis, cl.value, tol.isotropic);
        }
        for (Eigen::Index q = 0; q < k; ++q) out.right.col(static_cast<Eigen::Index>(cl.members[static_cast<std::size_t>(q)])) = normalized.col(q);
    }

    const Eigen::MatrixXcd pr = p.apply(out.right);
    out.left = out.right.transpose() * p.dense().cast<Complex>();
    const auto n = out.right.rows();
    const Eigen::MatrixXcd gram = out.right.transpose() * pr;
    out.p_residual = max_abs(gram - Eigen::MatrixXcd::Identity(n, n));
    if (out.p_residual > tol.p_normalization) {
        Eigen::Index worst = 0;
        (gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().rowwise().maxCoeff().maxCoeff(&worst);
        const Complex at = out.eigenvalues[worst];
        throw NormalizationFailure("R^T P R deviates from I by " + std::to_string(out.p_residual), at.real(), at.imag());
    }
    out.inverse_residual = out.p_residual;
    out.p_normalized = true;
    return out;
}

struct UnitEigenspaceCheck {
    double value = 0.0;  // +1 or -1
    std::size_t count = 0;
    std::size_t exceptional = 0;          // directions violating Pv = -value * v
    std::size_t allowed_exceptional = 0;  // nonzero only on cycles
    double p_residual = 0.0;              // max |Pv + value v| on the regular subspace
    double edge_residual = 0.0;           // edge relation on the same subspace
    double node_sum_residual = 0.0;       // max |sum_i v_{i->j}|
    double eigen_residual = 0.0;          // max |Bv - value v|
    bool multiplicity_ok = false;
    bool relations_ok = false;
};

struct Pm1Report {
    long long m_minus_n = 0;
    UnitEigenspaceCheck plus;
    UnitEigenspaceCheck minus;
    bool pass() const { return plus.multiplicity_ok && minus.multiplicity_ok && plus.relations_ok && minus.relations_ok; }
};

namespace detail {

inline UnitEigenspaceCheck check_unit_space(const EigenSystem& sys, const NbMatrix& nb, const ReversalOperator& p,
                                            double value, std::size_t allowed, long long m_minus_n,
                                            const Tolerances& tol, double relation_tol) {
    UnitEigenspaceCheck out;
    out.value = value;
    out.allowed_exceptional = allowed;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < sys.eigenvalues.size(); ++i)
        if (std::abs(sys.eigenvalues[i] - value) < tol.cluster) cols.push_back(i);
    out.count = cols.size();
    out.multiplicity_ok = static_cast<long long>(out.count) >= m_minus_n;
    if (cols.empty()) {
        out.relations_ok = true;
        return out;
    }
    const auto dim = sys.right.rows();
    const auto k = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXcd v(dim, k);
    for (Eigen::Index q = 0; q < k; ++q) v.col(q) = sys.right.col(cols[static_cast<std::size_t>(q)]);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
    const Eigen::MatrixXcd q_basis = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, k);

    // Pv = -value * v on all but the allowed exceptional directions.
    const Eigen::MatrixXcd w = p.apply(q_basis) + value * q_basis;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > relation_tol) ++out.exceptional;
    const auto skip = static_cast<Eigen::Index>(std::min<std::size_t>(allowed, cols.size()));
    const Eigen::MatrixXcd regular = q_basis * svd.matrixV().rightCols(k - skip);

    const auto& idx = nb.edges();
    for (Eigen::Index q = 0; q < regular.cols(); ++q) {
        std::vector<Complex> in_sum(nb.graph().node_count());
        for (std::size_t e = 0; e < idx.size(); ++e) {
            const Complex a = regular(static_cast<Eigen::Index>(e), q);
            const Complex r = regular(static_cast<Eigen::Index>(idx.reverse(e)), q);
            out.edge_residual = std::max(out.edge_residual, std::abs(value < 0 ? a - r : a + r));
            in_sum[idx.target(e)] += a;
        }
        for (const auto& s : in_sum) out.node_sum_residual = std::max(out.node_sum_residual, std::abs(s));
    }
    out.p_residual = regular.cols() ? max_abs(p.apply(regular) + value * regular) : 0.0;
    out.eigen_residual = max_abs(nb.dense().cast<Complex>() * q_basis - value * q_basis);
    out.relations_ok = out.exceptional <= allowed && out.p_residual <= relation_tol && out.edge_residual <= relation_tol &&
                       out.node_sum_residual <= relation_tol && out.eigen_residual <= relation_tol;
    return out;
}

}  // namespace detail

/// Multiplicities of +/-1 and the eigenvector relations Pv = v (for -1) and
/// Pv = -v (for +1), the edge relations and the vanishing in-sums.
inline Pm1Report check_pm1(const EigenSystem& sys, const ReversalOperator& p, const Graph& g,
                           const Tolerances& tol = {}, double relation_tol = 1e-8) {
    const NbMatrix nb(g);
    if (nb.dim() != sys.size()) throw DomainError("check_pm1: eigensystem does not belong to this graph");
    Pm1Report report;
    report.m_minus_n = static_cast<long long>(g.edge_count()) - static_cast<long long>(g.node_count());
    // The +1 space contains the cycle space and the -1 space the kernel of the
    // unsigned incidence matrix. Only on a cycle (m == n) are there further
    // directions: the all-ones vector for +1 and, if bipartite, one for -1.
    const bool cycle = report.m_minus_n == 0;
    const std::size_t plus_allowed = cycle ? 1 : 0;
    const std::size_t minus_allowed = cycle && is_bipartite(g) ? 1 : 0;
    report.plus = detail::check_unit_space(sys, nb, p, 1.0, plus_allowed, report.m_minus_n, tol, relation_tol);
    report.minus = detail::check_unit_space(sys, nb, p, -1.0, minus_allowed, report.m_minus_n, tol, relation_tol);
    return report;
}

/// min over i with lambda_i != lambda_1 of |lambda_1 - lambda_i|.
inline double spectral_gap(const EigenSystem& sys, const Tolerances& tol = {}) {
    if (sys.size() < 2) throw DomainError("spectral_gap: fewer than two eigenvalues");
    const Complex top = sys.lambda(0);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sys.size(); ++i) gap = std::min(gap, std::abs(top - sys.lambda(i)));
    if (!(gap > tol.cluster)) throw DomainError("spectral_gap: leading eigenvalue is not simple");
    return gap;
}

}  // namespace nbspec
