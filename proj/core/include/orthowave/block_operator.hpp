#pragma once

#include "orthowave/level_blocks.hpp"
#include "orthowave/sparse_grid.hpp"

#include <span>
#include <vector>

namespace orthowave {

/// Matrix-free operator alpha I + s G on a sparse index set, where
/// G = sum_i P_ii M_i - 2 sum_{i<j} P_ij B_i B_j and M_i, B_i act along axis i.
/// Identity factors in the remaining axes are never formed. The index set and
/// level blocks must outlive the operator.
class BlockOperator {
public:
    /// p is the row-major d x d coefficient table.
    BlockOperator(const SparseIndexSet& set, const LevelBlocks& blocks, std::vector<double> p, double alpha,
                  double scale, int threads = 1);

    [[nodiscard]] std::size_t size() const noexcept { return set_->total_count(); }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] const SparseIndexSet& index_set() const noexcept { return *set_; }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return p_; }

    void apply(std::span<const double> v, std::span<double> w) const;
    [[nodiscard]] std::vector<double> apply(const std::vector<double>& v) const;

private:
    struct MassTerm {
        std::size_t in_block;
        int axis;
    };
    struct CrossSlice {
        int n_i;
        std::vector<std::pair<int, std::size_t>> inputs;   // (n_j, block)
        std::vector<std::pair<int, std::size_t>> outputs;  // (m_i, block)
        std::vector<std::size_t> temp_extent;
    };
    struct CrossGroup {
        int i;
        int j;
        int m_j;
        std::vector<CrossSlice> slices;
    };

    void build_plan();

    const SparseIndexSet* set_;
    const LevelBlocks* blocks_;
    std::vector<double> p_;
    double alpha_;
    double scale_;
    int threads_;
    std::vector<std::vector<MassTerm>> mass_;             // per output block
    std::vector<std::vector<CrossGroup>> cross_phases_;  // per axis pair
    std::size_t max_temp_ = 0;
};

/// Left-hand side of a Crank-Nicolson step: (1/tau + r/2) I + G/2.
BlockOperator make_cn_system(const SparseIndexSet& set, const LevelBlocks& blocks, const std::vector<double>& p,
                             double r, double tau, int threads = 1);
/// Right-hand side of a Crank-Nicolson step: (1/tau - r/2) I - G/2.
BlockOperator make_cn_rhs(const SparseIndexSet& set, const LevelBlocks& blocks, const std::vector<double>& p,
                          double r, double tau, int threads = 1);
/// Implicit Euler half step of size tau/2: (2/tau + r) I + G.
BlockOperator make_euler_system(const SparseIndexSet& set, const LevelBlocks& blocks, const std::vector<double>& p,
                                double r, double tau, int threads = 1);

}  // namespace orthowave
