#pragma once

#include "orthowave/basis1d.hpp"
#include "orthowave/market.hpp"
#include "orthowave/sparse_grid.hpp"

#include <span>
#include <vector>

namespace orthowave {

/// sum_lambda c_lambda psi_lambda(z), touching only functions whose support contains z.
double evaluate_expansion(std::span<const double> c, const SparseIndexSet& set, const Basis1D& basis,
                          std::span<const double> z);

/// Option value at prices s with time t to maturity. Throws StageError(evaluate) when
/// the mapped point is not strictly inside the unit cube.
double evaluate_solution_at_prices(std::span<const double> c, const SparseIndexSet& set, const Basis1D& basis,
                                   const MarketParams& m, const DomainSpec& dom, std::span<const double> s,
                                   double t);

}  // namespace orthowave
