#pragma once

#include "orthowave/piecewise_poly.hpp"

#include <Eigen/Dense>

#include <vector>

namespace orthowave::detail {

struct NullSpace {
    Eigen::MatrixXd basis;            // columns span the null space
    Eigen::VectorXd singular_values;  // descending
};

/// Null space from a full SVD with rank cutoff rel_tol * sigma_max.
NullSpace null_space(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

/// Gram-Schmidt with one re-orthogonalization pass, followed by normalization.
std::vector<PiecewisePoly> gram_schmidt(std::vector<PiecewisePoly> fs);

/// Sum of coefficient-weighted functions, weights taken from column col of w.
PiecewisePoly combine(const Eigen::MatrixXd& w, Eigen::Index col, const std::vector<PiecewisePoly>& fs);

/// Trims end pieces below 1e-12 relative magnitude and flips the sign so the
/// leading coefficient of the first piece is positive.
PiecewisePoly with_sign_convention(const PiecewisePoly& p);

}  // namespace orthowave::detail
