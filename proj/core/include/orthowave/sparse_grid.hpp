#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace orthowave {

using LevelVector = std::vector<int>;

/// Per-dimension (level, translation) pair list. Level-0 translations run -5..6
/// (-5..0 are scaling functions), level j >= 1 translations run 1..6*2^j.
struct MultiIndex {
    std::vector<int> level;
    std::vector<int> translation;
};

/// Dense tensor block of all functions with a fixed level vector.
/// Entries are stored row-major: the last dimension varies fastest.
struct Block {
    LevelVector level;
    std::vector<std::size_t> extent;
    std::size_t offset = 0;
    std::size_t size = 0;
};

/// Sparse tensor-product index set {lambda : sum_i |lambda_i| <= k}.
class SparseIndexSet {
public:
    SparseIndexSet(int d, int k, std::vector<std::size_t> level_sizes);

    [[nodiscard]] int dim() const noexcept { return d_; }
    [[nodiscard]] int level() const noexcept { return k_; }
    [[nodiscard]] std::size_t total_count() const noexcept { return total_; }
    [[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] const std::vector<std::size_t>& level_sizes() const noexcept { return level_sizes_; }
    /// Block index for a level vector, or -1 when it is not in the set.
    [[nodiscard]] std::ptrdiff_t find_block(const LevelVector& m) const;
    /// Multi-index of the global position i.
    [[nodiscard]] MultiIndex multi_index(std::size_t i) const;
    /// Global position of a multi-index, or -1 when it is not in the set.
    [[nodiscard]] std::ptrdiff_t position(const MultiIndex& mi) const;

private:
    int d_;
    int k_;
    std::vector<std::size_t> level_sizes_;
    std::vector<Block> blocks_;
    std::map<LevelVector, std::size_t> lookup_;
    std::size_t total_ = 0;
};

/// Lemma convention: 1D level blocks of size 12, 12, 24, ..., 6*2^k.
SparseIndexSet enumerate(int d, int k);

enum class LevelConvention { lemma, table };

LevelConvention parse_convention(const std::string& s);
const char* convention_name(LevelConvention c) noexcept;

/// Table convention: level 0 is the scaling-only grid with 6 functions per axis,
/// level k >= 1 equals the lemma set at k - 1.
SparseIndexSet enumerate_table(int d, int k);
SparseIndexSet enumerate(int d, int k, LevelConvention convention);

/// Closed-form cardinality for 2 <= d <= 5 and k >= 1 (lemma convention).
std::uint64_t cardinality_formula(int d, int k);
/// Full tensor-product count 6^d 2^{dk}.
std::uint64_t anisotropic_count(int d, int k);

/// All ordered pairs (m, n) of block indices.
std::vector<std::pair<std::size_t, std::size_t>> block_pairs(const SparseIndexSet& s);

}  // namespace orthowave
