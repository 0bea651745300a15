#pragma once

#include "orthowave/level_blocks.hpp"

#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace orthowave::detail {

inline std::size_t product(const std::vector<std::size_t>& e) {
    return std::accumulate(e.begin(), e.end(), std::size_t{1}, std::multiplies<>());
}

/// y += coef * (a along axis) x for row-major tensors; x has extents ext and y has
/// the same extents except ext[axis] replaced by a.rows.
inline void mode_product(const CsrMatrix& a, const double* x, const std::vector<std::size_t>& ext, int axis,
                         double* y, double coef) {
    std::size_t outer = 1;
    std::size_t inner = 1;
    for (int k = 0; k < axis; ++k) outer *= ext[static_cast<std::size_t>(k)];
    for (std::size_t k = static_cast<std::size_t>(axis) + 1; k < ext.size(); ++k) inner *= ext[k];
    const std::size_t ncols = a.cols;
    const std::size_t nrows = a.rows;
    for (std::size_t o = 0; o < outer; ++o) {
        const double* xo = x + o * ncols * inner;
        double* yo = y + o * nrows * inner;
        for (std::size_t r = 0; r < nrows; ++r) {
            double* yr = yo + r * inner;
            for (std::size_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
                const double c = coef * a.val[p];
                const double* xc = xo + a.col[p] * inner;
                for (std::size_t t = 0; t < inner; ++t) yr[t] += c * xc[t];
            }
        }
    }
}

}  // namespace orthowave::detail
