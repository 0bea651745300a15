#include "orthowave/sparse_grid.hpp"

#include "orthowave/errors.hpp"

#include <numeric>
#include <stdexcept>

namespace orthowave {

namespace {

void level_vectors(int d, int k, LevelVector& cur, std::vector<LevelVector>& out) {
    const int used = std::accumulate(cur.begin(), cur.end(), 0);
    if (static_cast<int>(cur.size()) == d) {
        out.push_back(cur);
        return;
    }
    for (int m = 0; used + m <= k; ++m) {
        cur.push_back(m);
        level_vectors(d, k, cur, out);
        cur.pop_back();
    }
}

std::vector<std::size_t> lemma_sizes(int k) {
    std::vector<std::size_t> s;
    for (int m = 0; m <= k; ++m) s.push_back(m == 0 ? 12 : 6 * (std::size_t{1} << m));
    return s;
}

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

SparseIndexSet::SparseIndexSet(int d, int k, std::vector<std::size_t> level_sizes)
    : d_(d), k_(k), level_sizes_(std::move(level_sizes)) {
    if (d < 1 || k < 0) throw std::invalid_argument("SparseIndexSet: need d >= 1 and k >= 0");
    if (level_sizes_.size() < static_cast<std::size_t>(k) + 1)
        throw std::invalid_argument("SparseIndexSet: missing level sizes");
    std::vector<LevelVector> ms;
    LevelVector cur;
    level_vectors(d, k, cur, ms);
    for (const LevelVector& m : ms) {
        Block b;
        b.level = m;
        b.size = 1;
        for (int mi : m) {
            b.extent.push_back(level_sizes_[static_cast<std::size_t>(mi)]);
            b.size *= b.extent.back();
        }
        b.offset = total_;
        total_ += b.size;
        lookup_.emplace(m, blocks_.size());
        blocks_.push_back(std::move(b));
    }
}

std::ptrdiff_t SparseIndexSet::find_block(const LevelVector& m) const {
    const auto it = lookup_.find(m);
    return it == lookup_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

MultiIndex SparseIndexSet::multi_index(std::size_t i) const {
    if (i >= total_) throw std::out_of_range("SparseIndexSet::multi_index");
    std::size_t lo = 0, hi = blocks_.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (blocks_[mid].offset <= i) lo = mid; else hi = mid;
    }
    const Block& b = blocks_[lo];
    MultiIndex mi;
    mi.level = b.level;
    mi.translation.assign(static_cast<std::size_t>(d_), 0);
    std::size_t r = i - b.offset;
    for (int a = d_ - 1; a >= 0; --a) {
        const auto ua = static_cast<std::size_t>(a);
        const auto local = static_cast<int>(r % b.extent[ua]);
        r /= b.extent[ua];
        mi.translation[ua] = b.level[ua] == 0 ? local - 5 : local + 1;
    }
    return mi;
}

std::ptrdiff_t SparseIndexSet::position(const MultiIndex& mi) const {
    const std::ptrdiff_t bi = find_block(mi.level);
    if (bi < 0) return -1;
    const Block& b = blocks_[static_cast<std::size_t>(bi)];
    std::size_t pos = 0;
    for (std::size_t a = 0; a < b.extent.size(); ++a) {
        const int local = b.level[a] == 0 ? mi.translation[a] + 5 : mi.translation[a] - 1;
        if (local < 0 || static_cast<std::size_t>(local) >= b.extent[a]) return -1;
        pos = pos * b.extent[a] + static_cast<std::size_t>(local);
    }
    return static_cast<std::ptrdiff_t>(b.offset + pos);
}

SparseIndexSet enumerate(int d, int k) { return SparseIndexSet(d, k, lemma_sizes(k)); }

SparseIndexSet enumerate_table(int d, int k) {
    if (k < 0) throw std::invalid_argument("enumerate_table: negative level");
    if (k == 0) return SparseIndexSet(d, 0, {6});
    return enumerate(d, k - 1);
}

SparseIndexSet enumerate(int d, int k, LevelConvention convention) {
    return convention == LevelConvention::table ? enumerate_table(d, k) : enumerate(d, k);
}

LevelConvention parse_convention(const std::string& s) {
    if (s == "lemma") return LevelConvention::lemma;
    if (s == "table") return LevelConvention::table;
    throw StageError(Stage::parse, "unknown level convention '" + s + "' (expected lemma or table)");
}

const char* convention_name(LevelConvention c) noexcept {
    return c == LevelConvention::table ? "table" : "lemma";
}

std::uint64_t cardinality_formula(int d, int k) {
    if (k < 1) throw std::invalid_argument("cardinality_formula: k must be at least 1");
    const auto uk = static_cast<std::uint64_t>(k);
    const std::uint64_t p2 = std::uint64_t{1} << (k + 1);
    switch (d) {
        case 2: return 36 * (uk + 2) * p2;
        case 3: return 216 * (uk * uk + 7 * uk + 8) * (std::uint64_t{1} << k);
        case 4: return ipow(6, 4) * p2 * (uk * uk * uk + 15 * uk * uk + 56 * uk + 48) / 6;
        case 5: return ipow(6, 5) * p2 * (uk * uk * uk * uk + 26 * uk * uk * uk + 203 * uk * uk + 538 * uk + 384) / 24;
        default: throw std::invalid_argument("cardinality_formula: supported for 2 <= d <= 5");
    }
}

std::uint64_t anisotropic_count(int d, int k) {
    if (d < 1 || k < 0) throw std::invalid_argument("anisotropic_count: need d >= 1, k >= 0");
    return ipow(6, d) * ipow(2, d * k);
}

std::vector<std::pair<std::size_t, std::size_t>> block_pairs(const SparseIndexSet& s) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(s.blocks().size() * s.blocks().size());
    for (std::size_t m = 0; m < s.blocks().size(); ++m)
        for (std::size_t n = 0; n < s.blocks().size(); ++n) out.emplace_back(m, n);
    return out;
}

}  // namespace orthowave
