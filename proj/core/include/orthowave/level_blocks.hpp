#pragma once

#include "orthowave/basis1d.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace orthowave {

struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  ///< row-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Compressed sparse rows; keeps every entry that is not exactly zero.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col;
    std::vector<double> val;

    static CsrMatrix from_dense(const DenseMatrix& a);
    [[nodiscard]] std::size_t nonzeros() const noexcept { return val.size(); }
};

/// 1D blocks between levels m and n: M = <f'_lambda, f'_mu>, B = <f'_lambda, f_mu>.
struct LevelBlock {
    int m = 0;
    int n = 0;
    DenseMatrix M;
    DenseMatrix B;
};

class LevelBlocks {
public:
    LevelBlocks() = default;
    LevelBlocks(int max_level, std::vector<std::size_t> sizes, std::vector<LevelBlock> blocks);

    [[nodiscard]] int max_level() const noexcept { return max_level_; }
    [[nodiscard]] std::size_t level_size(int m) const { return sizes_.at(static_cast<std::size_t>(m)); }
    [[nodiscard]] const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    [[nodiscard]] const LevelBlock& block(int m, int n) const { return blocks_[index(m, n)]; }
    [[nodiscard]] const CsrMatrix& stiffness(int m, int n) const { return m_csr_[index(m, n)]; }
    [[nodiscard]] const CsrMatrix& advection(int m, int n) const { return b_csr_[index(m, n)]; }
    [[nodiscard]] const std::vector<LevelBlock>& all() const noexcept { return blocks_; }

    /// Largest deviation of the assembled mass blocks from delta_{mn} I.
    double mass_residual = 0.0;

private:
    [[nodiscard]] std::size_t index(int m, int n) const {
        return static_cast<std::size_t>(m) * (static_cast<std::size_t>(max_level_) + 1) + static_cast<std::size_t>(n);
    }
    int max_level_ = 0;
    std::vector<std::size_t> sizes_;
    std::vector<LevelBlock> blocks_;
    std::vector<CsrMatrix> m_csr_;
    std::vector<CsrMatrix> b_csr_;
};

/// Exact quadrature of all blocks for 0 <= m, n <= k. Throws StageError(assembly)
/// when a mass block deviates from delta_{mn} I by more than 1e-8.
LevelBlocks assemble_level_blocks(const Basis1D& b, int k, int threads = 1);

/// max |B^{m,n} + (B^{n,m})^T| over all block pairs.
double antisymmetry_residual(const LevelBlocks& lb);

/// Full 1D stiffness (M) or advection (B) matrix in basis order.
DenseMatrix full_matrix(const LevelBlocks& lb, bool stiffness);

/// Text serialization with a header per block "m n rows cols" and hexadecimal floats.
std::string serialize_level_blocks(const LevelBlocks& lb);
std::optional<LevelBlocks> parse_level_blocks(const std::string& text);

/// Cache file name for a generator hash, level and basis flavour.
std::filesystem::path level_block_cache_path(const std::filesystem::path& dir, const std::string& generator_hash,
                                             int k, bool scaling_only);
void write_level_block_cache(const std::filesystem::path& file, const LevelBlocks& lb);
std::optional<LevelBlocks> read_level_block_cache(const std::filesystem::path& file);

}  // namespace orthowave
