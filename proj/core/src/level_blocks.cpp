#include "orthowave/level_blocks.hpp"

#include "orthowave/errors.hpp"
#include "orthowave/generator_io.hpp"
#include "orthowave/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace orthowave {

namespace {

constexpr const char* kMagic = "orthowave-level-blocks";
constexpr int kVersion = 1;

bool overlap(const PiecewisePoly& a, const PiecewisePoly& b) {
    return std::min(a.support_end(), b.support_end()) - std::max(a.support_begin(), b.support_begin()) >
           PiecewisePoly::kBreakTolerance;
}

void put_matrix(std::ostringstream& out, const DenseMatrix& a) {
    char buf[40];
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%a", a(i, j));
            out << (j ? " " : "") << buf;
        }
        out << '\n';
    }
}

bool get_matrix(std::istringstream& in, DenseMatrix& a) {
    std::string tok;
    for (double& v : a.data) {
        if (!(in >> tok)) return false;
        char* end = nullptr;
        v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') return false;
    }
    return true;
}

}  // namespace

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& a) {
    CsrMatrix c;
    c.rows = a.rows;
    c.cols = a.cols;
    c.row_ptr.reserve(a.rows + 1);
    c.row_ptr.push_back(0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) {
            const double v = a(i, j);
            if (v != 0.0) {
                c.col.push_back(j);
                c.val.push_back(v);
            }
        }
        c.row_ptr.push_back(c.val.size());
    }
    return c;
}

LevelBlocks::LevelBlocks(int max_level, std::vector<std::size_t> sizes, std::vector<LevelBlock> blocks)
    : max_level_(max_level), sizes_(std::move(sizes)) {
    const auto levels = static_cast<std::size_t>(max_level_) + 1;
    if (sizes_.size() != levels || blocks.size() != levels * levels)
        throw std::invalid_argument("LevelBlocks: inconsistent block count");
    blocks_.resize(blocks.size());
    for (LevelBlock& b : blocks) {
        const std::size_t i = index(b.m, b.n);
        blocks_[i] = std::move(b);
    }
    for (const LevelBlock& b : blocks_) {
        m_csr_.push_back(CsrMatrix::from_dense(b.M));
        b_csr_.push_back(CsrMatrix::from_dense(b.B));
    }
}

LevelBlocks assemble_level_blocks(const Basis1D& basis, int k, int threads) {
    if (k > basis.max_level()) throw StageError(Stage::assembly, "assemble_level_blocks: basis has too few levels");
    const int levels = k + 1;
    std::vector<std::size_t> sizes;
    for (int m = 0; m < levels; ++m) sizes.push_back(basis.level_size(m));
    std::vector<PiecewisePoly> deriv(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) deriv[i] = basis[i].shape.derivative();

    std::vector<LevelBlock> blocks(static_cast<std::size_t>(levels * levels));
    std::vector<double> mass_res(blocks.size(), 0.0);
    parallel_for(blocks.size(), threads, [&](std::size_t idx, int) {
        const int m = static_cast<int>(idx) / levels;
        const int n = static_cast<int>(idx) % levels;
        LevelBlock& blk = blocks[idx];
        blk.m = m;
        blk.n = n;
        const std::size_t om = basis.level_offset(m);
        const std::size_t on = basis.level_offset(n);
        blk.M = DenseMatrix(sizes[static_cast<std::size_t>(m)], sizes[static_cast<std::size_t>(n)]);
        blk.B = DenseMatrix(blk.M.rows, blk.M.cols);
        double res = 0.0;
        for (std::size_t i = 0; i < blk.M.rows; ++i) {
            for (std::size_t j = 0; j < blk.M.cols; ++j) {
                const BasisFunction& f = basis[om + i];
                const BasisFunction& g = basis[on + j];
                double mass = 0.0;
                if (overlap(f.shape, g.shape)) {
                    blk.M(i, j) = inner_product(deriv[om + i], deriv[on + j]);
                    blk.B(i, j) = inner_product(deriv[om + i], g.shape);
                    mass = inner_product(f.shape, g.shape);
                }
                res = std::max(res, std::abs(mass - (m == n && i == j ? 1.0 : 0.0)));
            }
        }
        mass_res[idx] = res;
    });
    LevelBlocks lb(k, sizes, std::move(blocks));
    lb.mass_residual = *std::max_element(mass_res.begin(), mass_res.end());
    if (!(lb.mass_residual <= 1e-8)) {
        std::ostringstream msg;
        msg << "mass blocks deviate from the identity by " << lb.mass_residual;
        throw StageError(Stage::assembly, msg.str());
    }
    return lb;
}

double antisymmetry_residual(const LevelBlocks& lb) {
    double res = 0.0;
    for (int m = 0; m <= lb.max_level(); ++m) {
        for (int n = 0; n <= lb.max_level(); ++n) {
            const DenseMatrix& a = lb.block(m, n).B;
            const DenseMatrix& b = lb.block(n, m).B;
            for (std::size_t i = 0; i < a.rows; ++i)
                for (std::size_t j = 0; j < a.cols; ++j) res = std::max(res, std::abs(a(i, j) + b(j, i)));
        }
    }
    return res;
}

DenseMatrix full_matrix(const LevelBlocks& lb, bool stiffness) {
    std::size_t n = 0;
    std::vector<std::size_t> off;
    for (std::size_t s : lb.sizes()) {
        off.push_back(n);
        n += s;
    }
    DenseMatrix out(n, n);
    for (const LevelBlock& b : lb.all()) {
        const DenseMatrix& a = stiffness ? b.M : b.B;
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j)
                out(off[static_cast<std::size_t>(b.m)] + i, off[static_cast<std::size_t>(b.n)] + j) = a(i, j);
    }
    return out;
}

std::string serialize_level_blocks(const LevelBlocks& lb) {
    std::ostringstream out;
    char buf[40];
    out << "max_level " << lb.max_level() << '\n' << "sizes";
    for (std::size_t s : lb.sizes()) out << ' ' << s;
    std::snprintf(buf, sizeof buf, "%a", lb.mass_residual);
    out << '\n' << "mass_residual " << buf << '\n';
    for (const LevelBlock& b : lb.all()) {
        out << "block " << b.m << ' ' << b.n << ' ' << b.M.rows << ' ' << b.M.cols << '\n';
        put_matrix(out, b.M);
        put_matrix(out, b.B);
    }
    return out.str();
}

std::optional<LevelBlocks> parse_level_blocks(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    int k = 0;
    if (!(in >> tag >> k) || tag != "max_level" || k < 0) return std::nullopt;
    if (!(in >> tag) || tag != "sizes") return std::nullopt;
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k) + 1);
    for (std::size_t& s : sizes)
        if (!(in >> s)) return std::nullopt;
    std::string mass_tok;
    if (!(in >> tag >> mass_tok) || tag != "mass_residual") return std::nullopt;
    const double mass = std::strtod(mass_tok.c_str(), nullptr);
    std::vector<LevelBlock> blocks;
    for (std::size_t i = 0; i < sizes.size() * sizes.size(); ++i) {
        LevelBlock b;
        std::size_t rows = 0, cols = 0;
        if (!(in >> tag >> b.m >> b.n >> rows >> cols) || tag != "block") return std::nullopt;
        if (b.m < 0 || b.n < 0 || b.m > k || b.n > k) return std::nullopt;
        if (rows != sizes[static_cast<std::size_t>(b.m)] || cols != sizes[static_cast<std::size_t>(b.n)])
            return std::nullopt;
        b.M = DenseMatrix(rows, cols);
        b.B = DenseMatrix(rows, cols);
        if (!get_matrix(in, b.M) || !get_matrix(in, b.B)) return std::nullopt;
        blocks.push_back(std::move(b));
    }
    try {
        LevelBlocks lb(k, sizes, std::move(blocks));
        lb.mass_residual = mass;
        return lb;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::filesystem::path level_block_cache_path(const std::filesystem::path& dir, const std::string& generator_hash,
                                             int k, bool scaling_only) {
    return dir / ("blocks_" + generator_hash + "_k" + std::to_string(k) + (scaling_only ? "_scaling" : "") + ".txt");
}

void write_level_block_cache(const std::filesystem::path& file, const LevelBlocks& lb) {
    const std::string body = serialize_level_blocks(lb);
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(body)));
    write_file_atomic(file, std::string(kMagic) + ' ' + std::to_string(kVersion) + "\nhash " + hash + '\n' + body);
}

std::optional<LevelBlocks> read_level_block_cache(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    std::string magic, tag, stored;
    int version = 0;
    if (!(in >> magic >> version >> tag >> stored) || magic != kMagic || version != kVersion || tag != "hash")
        return std::nullopt;
    in.ignore(1);
    std::ostringstream rest;
    rest << in.rdbuf();
    const std::string body = rest.str();
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(body)));
    if (stored != hash) return std::nullopt;
    return parse_level_blocks(body);
}

}  // namespace orthowave
