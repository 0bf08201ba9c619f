#pragma once

#include <cstddef>

namespace nbspec {

/// Default numerical tolerances. The acceptance suite pins these values; the
/// CLI exposes a few of them as overrides.
struct Tolerances {
    // eigendecomposition
    double eigen_residual = 1e-8;  // ||BR - R Lambda|| <= tol * max(1, |lambda1|)
    double near_defective = 1e-6;  // ||LR - I|| above this flags the system
    double cluster = 1e-6;         // eigenvalues closer than this share an eigenspace
    double null_space = 1e-8;      // relative singular value cut for eigenspace bases
    double p_normalization = 1e-8;
    double isotropic = 1e-8;

    // Perron power iteration on B + I
    double power_rayleigh = 1e-12;
    double power_residual = 1e-10;
    std::size_t power_max_iterations = 100000;

    // y(t) power iteration and root finding
    double y_relative = 1e-12;
    double root_residual = 1e-10;  // |y(t*) + t*^2| <= tol * t*^2
    double root_width = 1e-12;
    double cross_check = 1e-6;     // root vs direct rho(B^c) hard-error threshold

    // determinant identities
    double determinant = 1e-8;
};

}  // namespace nbspec
