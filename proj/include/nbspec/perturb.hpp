#pragma once

// How the Perron eigenvalue moves when a node is attached or removed:
// y(t), the root lambda_c, the H matrix and its Gershgorin disks, and the
// composite addition/removal analyses.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bounds.hpp"
#include "config.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "nb_matrix.hpp"
#include "spectra.hpp"

namespace nbspec {

/// LU factors of B - tI for one t above the spectral radius.
class ResolventContext {
  public:
    ResolventContext(const NbMatrix& nb, double t, double lambda1) : t_(t), dim_(nb.dim()) {
        if (!(t > lambda1)) throw DomainError("resolvent: t must exceed lambda1");
        const auto n = static_cast<Eigen::Index>(dim_);
        lu_.compute(nb.dense() - t * Eigen::MatrixXd::Identity(n, n));
    }

    double t() const noexcept { return t_; }
    std::size_t dim() const noexcept { return dim_; }

    /// Y(t) M = (B - tI)^{-1} M
    template <typename Derived>
    Eigen::MatrixXd solve(const Eigen::MatrixBase<Derived>& m) const {
        return lu_.solve(m);
    }

  private:
    double t_;
    std::size_t dim_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

struct YValue {
    double t = 0.0;
    double y = 0.0;
    bool degenerate = false;  // X = 0
    std::size_t iterations = 0;
    double bracket = 0.0;  // relative width of the Collatz-Wielandt bracket
};

namespace detail {

inline std::vector<Eigen::Index> nonzero_columns(const Eigen::MatrixXd& x) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index c = 0; c < x.cols(); ++c)
        if ((x.col(c).array() != 0.0).any()) cols.push_back(c);
    return cols;
}

// Spectral radius of a nonnegative matrix by shifted power iteration with
// Collatz-Wielandt bounds. Falls back to a dense eigensolve when the bounds
// cannot be formed (zero entries in the iterate) or do not close in time.
inline double nonnegative_radius(const Eigen::MatrixXd& k, Eigen::VectorXd w, double rel_tol, std::size_t max_it,
                                 std::size_t& iterations, double& bracket) {
    const Eigen::Index n = k.rows();
    if (w.size() != n || !(w.array() > 0.0).all()) w = Eigen::VectorXd::Ones(n);
    w /= w.sum();
    const Eigen::VectorXd first = k * w;
    const double shift = 0.5 * first.sum();
    bool bounded = true;
    for (iterations = 1; iterations <= max_it; ++iterations) {
        const Eigen::VectorXd kw = k * w;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(w[i] > 0.0)) {
                bounded = false;
                break;
            }
            const double r = kw[i] / w[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (!bounded) break;
        bracket = hi > 0.0 ? (hi - lo) / hi : 0.0;
        if (hi - lo <= rel_tol * hi) return 0.5 * (lo + hi);
        w = kw + shift * w;
        w /= w.sum();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(k, false);
    double rho = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) rho = std::max(rho, std::abs(es.eigenvalues()[i]));
    bracket = 0.0;
    return rho;
}

}  // namespace detail

/// y(t) = -rho(Y(t) X). -Y(t)X is nonnegative for t > lambda1, and its
/// nonzero spectrum is that of the block indexed by X's nonzero columns.
inline YValue y_of_t(const ResolventContext& ctx, const Eigen::MatrixXd& x, const Tolerances& tol = {}) {
    YValue out;
    out.t = ctx.t();
    const auto cols = detail::nonzero_columns(x);
    if (cols.empty()) {
        out.degenerate = true;
        return out;
    }
    const auto k = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd xj(x.rows(), k);
    for (Eigen::Index q = 0; q < k; ++q) xj.col(q) = x.col(cols[static_cast<std::size_t>(q)]);
    const Eigen::MatrixXd z = -ctx.solve(xj);
    Eigen::MatrixXd block(k, k);
    for (Eigen::Index r = 0; r < k; ++r) block.row(r) = z.row(cols[static_cast<std::size_t>(r)]);
    block = block.cwiseMax(0.0);  // roundoff only; the exact entries are >= 0

    Eigen::VectorXd start(k);
    const Eigen::RowVectorXd colsums = x.colwise().sum();
    for (Eigen::Index q = 0; q < k; ++q) start[q] = colsums[cols[static_cast<std::size_t>(q)]];
    const double rho =
        detail::nonnegative_radius(block, start, tol.y_relative, tol.power_max_iterations, out.iterations, out.bracket);
    out.y = -rho;
    return out;
}

inline YValue y_of_t(const NbMatrix& nb, const Eigen::MatrixXd& x, double t, double lambda1, const Tolerances& tol = {}) {
    if (x.isZero(0.0)) {
        YValue out;
        out.t = t;
        out.degenerate = true;
        if (!(t > lambda1)) throw DomainError("y(t): t must exceed lambda1");
        return out;
    }
    return y_of_t(ResolventContext(nb, t, lambda1), x, tol);
}

inline YValue y_of_t(const NbMatrix& nb, const Eigen::MatrixXd& x, double t, const Tolerances& tol = {}) {
    return y_of_t(nb, x, t, spectral_radius(nb, tol), tol);
}

/// Entrywise structure of -Y(t)X: its minimum entry and whether its zero
/// columns are exactly the zero columns of X.
struct ResolventStructure {
    double min_entry = 0.0;
    bool zero_columns_match = false;
};

inline ResolventStructure resolvent_structure(const NbMatrix& nb, const Eigen::MatrixXd& x, double t, double lambda1,
                                              double zero_tol = 1e-14) {
    const ResolventContext ctx(nb, t, lambda1);
    const Eigen::MatrixXd m = -ctx.solve(x);
    ResolventStructure out;
    out.min_entry = m.size() ? m.minCoeff() : 0.0;
    const double scale = std::max(1.0, max_abs(m));
    out.zero_columns_match = true;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const bool x_zero = (x.col(c).array() == 0.0).all();
        const bool m_zero = (m.col(c).cwiseAbs().array() <= zero_tol * scale).all();
        if (x_zero != m_zero) out.zero_columns_match = false;
    }
    return out;
}

struct RootResult {
    double lambda_c = 0.0;
    double residual = 0.0;  // |y + t^2| / t^2 at the returned point
    std::size_t evaluations = 0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Root of g(t) = y(t) + t^2 above lambda1, by bracketing and bisection.
inline RootResult find_lambda_c(const NbMatrix& nb, const Eigen::MatrixXd& x, double lambda1, const Tolerances& tol = {}) {
    if (x.isZero(0.0)) throw DomainError("find_lambda_c: X is zero (degree-one attachment)");
    RootResult out;
    auto g = [&](double t) {
        ++out.evaluations;
        return y_of_t(ResolventContext(nb, t, lambda1), x, tol).y + t * t;
    };

    double delta = 1e-6 * std::max(1.0, lambda1);
    double lo = lambda1 + delta;
    double g_lo = g(lo);
    for (int shrink = 0; g_lo >= 0.0; ++shrink) {
        if (shrink == 4) throw NumericalError("find_lambda_c: g(lambda1 + delta) >= 0; alpha11 may vanish");
        delta /= 10.0;
        lo = lambda1 + delta;
        g_lo = g(lo);
    }

    double step = 1.0;
    double hi = lambda1 + step;
    double g_hi = g(hi);
    while (g_hi <= 0.0) {
        lo = hi;
        g_lo = g_hi;
        step *= 2.0;
        if (step > std::ldexp(1.0, 60)) throw NumericalError("find_lambda_c: bracket expansion exceeded 2^60");
        hi = lambda1 + step;
        g_hi = g(hi);
    }

    double best_t = std::abs(g_lo) < std::abs(g_hi) ? lo : hi;
    double best_g = std::min(std::abs(g_lo), std::abs(g_hi));
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
        const double gm = g(mid);
        if (std::abs(gm) < best_g) {
            best_g = std::abs(gm);
            best_t = mid;
        }
        if (gm > 0.0)
            hi = mid;
        else
            lo = mid;
        const bool narrow = (hi - lo) <= tol.root_width * mid;
        if (narrow && best_g <= tol.root_residual * best_t * best_t) break;
        if (gm == 0.0) break;
    }
    out.lambda_c = best_t;
    out.residual = best_g / (best_t * best_t);
    out.lo = lo;
    out.hi = hi;
    return out;
}

struct HMatrix {
    double t = 0.0;
    Eigen::MatrixXcd alpha;  // v_i^L X v_j^R, constant in t
    Eigen::MatrixXcd h;      // alpha_ij / (lambda_i - t)
};

inline HMatrix h_from_alpha(const Eigen::MatrixXcd& alpha, const Eigen::VectorXcd& eigenvalues, double t) {
    HMatrix out;
    out.t = t;
    out.alpha = alpha;
    out.h = alpha;
    for (Eigen::Index i = 0; i < alpha.rows(); ++i) out.h.row(i) /= (eigenvalues[i] - t);
    return out;
}

inline HMatrix h_matrix(const EigenSystem& sys, const Eigen::MatrixXd& x, double t) {
    if (sys.near_defective) throw NumericalError("h_matrix refused: eigensystem is near-defective");
    if (sys.size() && !(t > sys.lambda(0).real())) throw DomainError("h_matrix: t must exceed lambda1");
    return h_from_alpha(lxr_matrix(sys, x), sys.eigenvalues, t);
}

struct GershgorinDisk {
    Complex center;
    double radius = 0.0;

    bool contains(Complex z, double slack = 0.0) const { return std::abs(z - center) <= radius + slack; }
    bool disjoint(const GershgorinDisk& o) const { return std::abs(center - o.center) > radius + o.radius; }

    /// Intersection with the real axis, if any.
    std::optional<std::pair<double, double>> real_interval() const {
        const double im = std::abs(center.imag());
        if (im > radius) return std::nullopt;
        const double half = std::sqrt(radius * radius - im * im);
        return std::make_pair(center.real() - half, center.real() + half);
    }
};

/// Column disks: center H_jj, radius sum over i != j of |H_ij|.
inline std::vector<GershgorinDisk> gershgorin_disks(const HMatrix& h) {
    const auto n = h.h.cols();
    std::vector<GershgorinDisk> out(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        auto& d = out[static_cast<std::size_t>(j)];
        d.center = h.h(j, j);
        d.radius = h.h.col(j).cwiseAbs().sum() - std::abs(d.center);
        d.radius = std::max(d.radius, 0.0);
    }
    return out;
}

/// Index of the first disk overlapping disk `k`, or nullopt if `k` is isolated.
inline std::optional<std::size_t> first_overlap(const std::vector<GershgorinDisk>& disks, std::size_t k) {
    for (std::size_t j = 0; j < disks.size(); ++j)
        if (j != k && !disks[k].disjoint(disks[j])) return j;
    return std::nullopt;
}

/// Every real point of the disk lies strictly below `level` (vacuous if none).
inline bool real_points_below(const GershgorinDisk& d, double level) {
    const auto iv = d.real_interval();
    return !iv || iv->second < level;
}

/// The whole disk lies strictly to the right of the vertical line Re z = level.
inline bool lies_above(const GershgorinDisk& d, double level) { return d.center.real() - d.radius > level; }

enum class Direction { addition, removal };

struct AnalysisOptions {
    Tolerances tol{};
    std::size_t curve_samples = 64;
    double curve_min_offset = 1e-3;
    double curve_max_offset = 10.0;
    bool eigensystem = true;  // alpha matrix, bounds and disks
};

/// Everything about the base graph that does not depend on the attachment.
struct BaseSpectra {
    Graph graph;
    NbMatrix nb;
    ReversalOperator reversal;
    ValidationReport report;
    bool cycle_base = false;
    double lambda1 = 0.0;
    std::optional<PerronPair> perron;
    std::optional<EigenSystem> eigensystem;  // P-normalized when present
    std::optional<double> gamma;
    std::vector<std::string> notes;
};

inline BaseSpectra prepare_base(const Graph& g, const AnalysisOptions& opts = {}) {
    BaseSpectra base;
    base.graph = g;
    base.nb = NbMatrix(g);
    base.reversal = build_reversal(g);
    base.report = validate(g);
    if (base.report.perron_applicable) {
        base.perron = perron(base.nb, opts.tol);
        base.lambda1 = base.perron->lambda1;
    } else if (base.report.connected && base.report.is_cycle) {
        base.cycle_base = true;
        base.lambda1 = 1.0;
        base.notes.push_back("cycle base graph: lambda1 = 1 is not simple, the interlacing hypotheses are unmet");
    } else {
        throw NotApplicable("base graph must be connected with minimum degree >= 2 (or a cycle)");
    }

    if (opts.eigensystem && !base.cycle_base) {
        EigenSystem sys = full_eigensystem(base.nb, opts.tol);
        if (sys.near_defective) {
            base.notes.push_back("eigensystem is near-defective; eigenbasis outputs omitted");
        } else {
            try {
                base.eigensystem = p_normalize(sys, base.reversal, opts.tol);
                base.gamma = spectral_gap(*base.eigensystem, opts.tol);
            } catch (const NormalizationFailure& e) {
                base.eigensystem.reset();
                base.notes.push_back(std::string("bilinear normalization failed: ") + e.what());
            }
        }
    }
    return base;
}

struct AdditionAnalysis {
    Direction direction = Direction::addition;
    std::size_t d = 0;
    std::vector<NodeId> neighbors;  // positions in the base graph
    double lambda1 = 0.0;           // Perron value without c
    double lambda_c = 0.0;          // Perron value with c (root finder)
    double direct_lambda_c = 0.0;   // power iteration on B^c
    double epsilon_c = 0.0;
    std::int64_t x_degree = 0;
    std::optional<double> alpha11;
    std::optional<double> eps_approx;
    std::vector<BoundReport> bounds;  // p = 1, 2, inf when the eigenbasis is available
    std::vector<std::pair<double, double>> y_samples;
    bool used_eq5 = false;
    bool cycle_base = false;
    RootResult root;
    std::vector<std::string> notes;

    const BoundReport* bound(NormOrder p) const {
        for (const auto& b : bounds)
            if (b.p == p) return &b;
        return nullptr;
    }
};

inline std::vector<double> curve_points(double lambda1, const AnalysisOptions& opts) {
    std::vector<double> ts;
    const std::size_t n = opts.curve_samples;
    if (n == 0) return ts;
    const double a = std::log10(opts.curve_min_offset);
    const double b = std::log10(opts.curve_max_offset);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        ts.push_back(lambda1 + std::pow(10.0, a + f * (b - a)));
    }
    return ts;
}

inline AdditionAnalysis analyze_addition(const BaseSpectra& base, std::span<const NodeId> neighbors,
                                         const AnalysisOptions& opts = {}) {
    const BlockDecomposition bd = block_decompose(base.graph, neighbors);
    const Eigen::MatrixXd x = bd.x_real();

    AdditionAnalysis out;
    out.d = bd.degree();
    out.neighbors = bd.neighbors;
    out.lambda1 = base.lambda1;
    out.cycle_base = base.cycle_base;
    out.notes = base.notes;
    out.x_degree = x_degree(base.graph, bd.neighbors);

    const NbMatrix extended(bd.extended);
    out.direct_lambda_c = spectral_radius(extended, opts.tol);
    if (x.isZero(0.0)) {
        out.lambda_c = base.lambda1;
    } else {
        out.root = find_lambda_c(base.nb, x, base.lambda1, opts.tol);
        out.lambda_c = out.root.lambda_c;
        const double mismatch = std::abs(out.lambda_c - out.direct_lambda_c);
        if (mismatch > opts.tol.cross_check * std::max(1.0, out.lambda_c)) {
            throw ConsistencyError("root finder and direct Perron value of B^c disagree by " + std::to_string(mismatch));
        }
    }
    out.epsilon_c = out.lambda_c - out.lambda1;

    if (base.perron) {
        out.alpha11 = alpha11_centrality(*base.perron, x);
        out.eps_approx = epsilon_approximation(*out.alpha11, out.lambda1);
    }
    if (base.eigensystem && base.gamma) {
        const Eigen::MatrixXcd lxr = lxr_matrix(*base.eigensystem, x);
        BoundInputs in{out.lambda1, *base.gamma, out.x_degree, out.alpha11.value_or(0.0), out.epsilon_c};
        out.bounds = bound_reports(lxr, in);
        out.used_eq5 = true;
    }

    for (double t : curve_points(base.lambda1, opts)) {
        if (x.isZero(0.0)) {
            out.y_samples.emplace_back(t, 0.0);
            continue;
        }
        out.y_samples.emplace_back(t, y_of_t(ResolventContext(base.nb, t, base.lambda1), x, opts.tol).y);
    }
    return out;
}

inline AdditionAnalysis analyze_addition(const Graph& g, std::span<const NodeId> neighbors, const AnalysisOptions& opts = {}) {
    return analyze_addition(prepare_base(g, opts), neighbors, opts);
}

/// Removal of c from g, reported as the addition of c to g - c with the
/// direction flag flipped: lambda_c is the Perron value of g itself.
inline AdditionAnalysis analyze_removal(const Graph& g, NodeId c, const AnalysisOptions& opts = {}) {
    if (c >= g.node_count()) throw DomainError("analyze_removal: unknown node " + std::to_string(c));
    const Graph rest = remove_node(g, c);
    if (!is_connected(rest)) throw DomainError("analyze_removal: removing the node disconnects the graph");
    std::vector<NodeId> nbrs;
    for (NodeId v : g.neighbors(c)) nbrs.push_back(v > c ? v - 1 : v);

    AdditionAnalysis out = analyze_addition(rest, nbrs, opts);
    out.direction = Direction::removal;
    if (out.direct_lambda_c < out.lambda1 - opts.tol.cross_check * std::max(1.0, out.lambda1)) {
        throw ConsistencyError("analyze_removal: Perron value increased after removing a node");
    }
    return out;
}

}  // namespace nbspec
