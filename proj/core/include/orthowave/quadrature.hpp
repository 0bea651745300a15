#pragma once

#include <vector>

namespace orthowave {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes.size()); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
/// Nodes are returned in increasing order.
QuadratureRule gauss_legendre(int n);

/// Shared 4-point rule used for products of cubics.
const QuadratureRule& gauss4();

}  // namespace orthowave
