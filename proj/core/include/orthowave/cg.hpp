#pragma once

#include <functional>
#include <span>

namespace orthowave {

/// y = A x.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct CgOptions {
    double tolerance = 1e-10;  ///< on ||r|| / ||rhs||
    int max_iterations = 1000;
    bool warm_start = false;   ///< start from the incoming x instead of zero
};

struct CgReport {
    int iterations = 0;
    double relative_residual = 0.0;
    double ritz_min = 0.0;  ///< extremal eigenvalues of the CG tridiagonal
    double ritz_max = 0.0;
    bool converged = false;
};

/// Conjugate gradients for a symmetric positive definite A. On a missed tolerance the
/// last iterate is kept in x and converged is false. Non-finite values throw StageError(solve).
CgReport cg_solve(const LinearOperator& a, std::span<const double> rhs, std::span<double> x,
                  const CgOptions& opt = {});

}  // namespace orthowave
