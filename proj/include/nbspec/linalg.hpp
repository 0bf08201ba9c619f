#pragma once

// Small dense linear-algebra helpers shared by the spectral code and the
// oracles: log-magnitude determinants, eigenvalue ordering, multiset pairing.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "error.hpp"

namespace nbspec {

using Complex = std::complex<double>;

/// A determinant stored as phase * exp(log_abs) so that products of
/// thousands of pivots neither overflow nor underflow.
struct LogDet {
    double log_abs = 0.0;
    Complex phase{1.0, 0.0};
    bool zero = false;

    static LogDet of_scalar(Complex z) {
        LogDet d;
        if (z == Complex{0.0, 0.0}) {
            d.zero = true;
            return d;
        }
        d.log_abs = std::log(std::abs(z));
        d.phase = z / std::abs(z);
        return d;
    }

    LogDet& operator*=(const LogDet& o) {
        zero = zero || o.zero;
        log_abs += o.log_abs;
        phase *= o.phase;
        return *this;
    }

    friend LogDet operator*(LogDet a, const LogDet& b) { return a *= b; }

    LogDet pow(long long k) const {
        LogDet d;
        if (zero) {
            if (k <= 0) throw DomainError("LogDet::pow: non-positive power of zero");
            d.zero = true;
            return d;
        }
        d.log_abs = log_abs * static_cast<double>(k);
        d.phase = std::pow(phase, static_cast<double>(k));
        if (phase.imag() == 0.0) d.phase = (phase.real() < 0.0 && (k % 2 != 0)) ? Complex{-1.0, 0.0} : Complex{1.0, 0.0};
        return d;
    }

    Complex value() const { return zero ? Complex{} : phase * std::exp(log_abs); }
};

/// LU with partial pivoting; the determinant is accumulated pivot by pivot.
/// `min_pivot_ratio` receives min|u_ii| / max|u_ii| as a cheap conditioning proxy.
template <typename Derived>
LogDet log_det(const Eigen::MatrixBase<Derived>& a, double* min_pivot_ratio = nullptr) {
    using Scalar = typename Derived::Scalar;
    using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (a.rows() != a.cols()) throw DomainError("log_det: matrix is not square");
    LogDet d;
    if (a.rows() == 0) return d;
    Eigen::PartialPivLU<Plain> lu{Plain(a)};
    const auto& packed = lu.matrixLU();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        const Complex u(packed(i, i));
        const double mag = std::abs(u);
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
        d *= LogDet::of_scalar(u);
    }
    if (lu.permutationP().determinant() < 0) d.phase = -d.phase;
    if (min_pivot_ratio) *min_pivot_ratio = hi > 0.0 ? lo / hi : 0.0;
    return d;
}

/// |a - b| / max(|a|, |b|, floor), evaluated without leaving log space.
inline double relative_difference(const LogDet& a, const LogDet& b, double floor = 1e-30) {
    if (a.zero && b.zero) return 0.0;
    const double la = a.zero ? -std::numeric_limits<double>::infinity() : a.log_abs;
    const double lb = b.zero ? -std::numeric_limits<double>::infinity() : b.log_abs;
    const double top = std::max(la, lb);
    const Complex za = a.zero ? Complex{} : a.phase * std::exp(la - top);
    const Complex zb = b.zero ? Complex{} : b.phase * std::exp(lb - top);
    const double diff = std::abs(za - zb);  // scaled by exp(-top)
    const double log_floor = std::log(floor);
    if (top >= log_floor) return diff;
    return diff * std::exp(top - log_floor);
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

/// Modulus descending, then real part descending, then imaginary descending.
inline bool eigen_order(const Complex& a, const Complex& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

inline void sort_eigenvalues(std::vector<Complex>& values) { std::sort(values.begin(), values.end(), eigen_order); }

/// Max distance over a greedy nearest pairing of two multisets (each a is
/// matched to the closest unused b). Infinite when the sizes differ.
inline double greedy_pairing_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const auto& x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t at = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(x - b[j]);
            if (dist < best) {
                best = dist;
                at = j;
            }
        }
        used[at] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

enum class NormOrder { one, two, infinity };

inline const char* to_string(NormOrder p) {
    switch (p) {
        case NormOrder::one:
            return "1";
        case NormOrder::two:
            return "2";
        case NormOrder::infinity:
            return "inf";
    }
    return "?";
}

/// Induced matrix p-norm: max column sum, largest singular value, max row sum.
template <typename Derived>
double induced_norm(const Eigen::MatrixBase<Derived>& m, NormOrder p) {
    if (m.size() == 0) return 0.0;
    switch (p) {
        case NormOrder::one:
            return static_cast<double>(m.cwiseAbs().colwise().sum().maxCoeff());
        case NormOrder::infinity:
            return static_cast<double>(m.cwiseAbs().rowwise().sum().maxCoeff());
        case NormOrder::two: {
            using Plain = typename Derived::PlainObject;
            Eigen::JacobiSVD<Plain> svd(m);
            return static_cast<double>(svd.singularValues()(0));
        }
    }
    return 0.0;
}

template <typename Derived>
std::vector<Complex> to_vector(const Eigen::MatrixBase<Derived>& v) {
    std::vector<Complex> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = Complex(v(i));
    return out;
}

}  // namespace nbspec
