#pragma once

#include "orthowave/basis1d.hpp"
#include "orthowave/sparse_grid.hpp"

#include <functional>
#include <span>
#include <vector>

namespace orthowave {

/// u(z) = max(K - exp(offset + slope.z), 0) for a put, max(exp(offset + slope.z) - K, 0)
/// for a call. All slopes must be positive.
struct ExpLinearPayoff {
    double strike = 1.0;
    double offset = 0.0;
    std::vector<double> slope;
    bool call = false;

    double operator()(std::span<const double> z) const;
};

struct ProjectionOptions {
    /// Gauss points per piece in the outer directions of cells cut by the kink;
    /// 0 selects default_kink_points(d).
    int kink_points = 0;
    int threads = 1;
};

/// Coefficients <u, psi_lambda> over the sparse index set. Every cell of width
/// 2^{-(m_i+3)} carries one polynomial piece per axis, so smooth cells are integrated
/// in closed form; cells cut by the kink hyperplane are split along it.
std::vector<double> project_payoff(const ExpLinearPayoff& u, const SparseIndexSet& set, const Basis1D& basis,
                                   const ProjectionOptions& opt = {});

/// Coefficients of a general function by composite tensor Gauss quadrature with the
/// polynomial cells subdivided extra_levels more times.
std::vector<double> project_function(const std::function<double(std::span<const double>)>& u,
                                     const SparseIndexSet& set, const Basis1D& basis, int extra_levels = 2,
                                     int points = 4, int threads = 1);

/// Default outer Gauss order for a dimension: 8 up to d = 3, 4 above.
int default_kink_points(int d) noexcept;

}  // namespace orthowave
