#include "orthowave/block_operator.hpp"

#include "orthowave/errors.hpp"
#include "orthowave/parallel.hpp"
#include "tensor_ops.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace orthowave {

using detail::mode_product;
using detail::product;

BlockOperator::BlockOperator(const SparseIndexSet& set, const LevelBlocks& blocks, std::vector<double> p,
                             double alpha, double scale, int threads)
    : set_(&set), blocks_(&blocks), p_(std::move(p)), alpha_(alpha), scale_(scale), threads_(threads) {
    const auto d = static_cast<std::size_t>(set.dim());
    if (p_.size() != d * d) throw std::invalid_argument("BlockOperator: coefficient table must be d x d");
    if (blocks.max_level() < set.level()) throw std::invalid_argument("BlockOperator: level blocks too coarse");
    for (std::size_t m = 0; m <= static_cast<std::size_t>(set.level()); ++m) {
        if (blocks.level_size(static_cast<int>(m)) != set.level_sizes()[m])
            throw std::invalid_argument("BlockOperator: level block sizes do not match the index set");
    }
    build_plan();
}

void BlockOperator::build_plan() {
    const SparseIndexSet& s = *set_;
    const int d = s.dim();
    const int k = s.level();
    const auto& bl = s.blocks();
    mass_.assign(bl.size(), {});
    for (std::size_t out = 0; out < bl.size(); ++out) {
        for (int i = 0; i < d; ++i) {
            if (p_[static_cast<std::size_t>(i * d + i)] == 0.0) continue;
            LevelVector n = bl[out].level;
            for (int ni = 0; ni <= k; ++ni) {
                n[static_cast<std::size_t>(i)] = ni;
                const std::ptrdiff_t in = s.find_block(n);
                if (in >= 0) mass_[out].push_back({static_cast<std::size_t>(in), i});
            }
        }
    }

    cross_phases_.clear();
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            if (p_[static_cast<std::size_t>(i * d + j)] == 0.0) continue;
            // Group output blocks by (rest, m_j); key uses -1 in the i-th slot.
            std::map<LevelVector, CrossGroup> groups;
            for (std::size_t out = 0; out < bl.size(); ++out) {
                LevelVector key = bl[out].level;
                key[static_cast<std::size_t>(i)] = -1;
                auto [it, fresh] = groups.try_emplace(key);
                if (!fresh) continue;
                CrossGroup& g = it->second;
                g.i = i;
                g.j = j;
                g.m_j = key[static_cast<std::size_t>(j)];
                for (int ni = 0; ni <= k; ++ni) {
                    CrossSlice slice;
                    slice.n_i = ni;
                    LevelVector q = key;
                    q[static_cast<std::size_t>(i)] = ni;
                    for (int nj = 0; nj <= k; ++nj) {
                        q[static_cast<std::size_t>(j)] = nj;
                        const std::ptrdiff_t in = s.find_block(q);
                        if (in >= 0) slice.inputs.emplace_back(nj, static_cast<std::size_t>(in));
                    }
                    LevelVector o = key;
                    for (int mi = 0; mi <= k; ++mi) {
                        o[static_cast<std::size_t>(i)] = mi;
                        const std::ptrdiff_t ob = s.find_block(o);
                        if (ob >= 0) slice.outputs.emplace_back(mi, static_cast<std::size_t>(ob));
                    }
                    if (slice.inputs.empty() || slice.outputs.empty()) continue;
                    q[static_cast<std::size_t>(j)] = g.m_j;
                    for (int qa : q) slice.temp_extent.push_back(s.level_sizes()[static_cast<std::size_t>(qa)]);
                    max_temp_ = std::max(max_temp_, product(slice.temp_extent));
                    g.slices.push_back(std::move(slice));
                }
            }
            std::vector<CrossGroup> phase;
            for (auto& [key, g] : groups)
                if (!g.slices.empty()) phase.push_back(std::move(g));
            cross_phases_.push_back(std::move(phase));
        }
    }
}

void BlockOperator::apply(std::span<const double> v, std::span<double> w) const {
    const SparseIndexSet& s = *set_;
    if (v.size() != s.total_count() || w.size() != s.total_count())
        throw StageError(Stage::solve, "BlockOperator::apply: dimension mismatch");
    const auto& bl = s.blocks();
    const int d = s.dim();

    parallel_for(bl.size(), threads_, [&](std::size_t out, int) {
        const Block& b = bl[out];
        double* wo = w.data() + b.offset;
        const double* vo = v.data() + b.offset;
        for (std::size_t t = 0; t < b.size; ++t) wo[t] = alpha_ * vo[t];
        if (scale_ == 0.0) return;
        for (const MassTerm& term : mass_[out]) {
            const Block& in = bl[term.in_block];
            const double coef = scale_ * p_[static_cast<std::size_t>(term.axis * d + term.axis)];
            const int mi = b.level[static_cast<std::size_t>(term.axis)];
            const int ni = in.level[static_cast<std::size_t>(term.axis)];
            mode_product(blocks_->stiffness(mi, ni), v.data() + in.offset, in.extent, term.axis, wo, coef);
        }
    });
    if (scale_ == 0.0) return;

    for (const std::vector<CrossGroup>& phase : cross_phases_) {
        std::vector<std::vector<double>> temp(static_cast<std::size_t>(std::max(threads_, 1)));
        parallel_for(phase.size(), threads_, [&](std::size_t gi, int worker) {
            const CrossGroup& g = phase[gi];
            std::vector<double>& t = temp[static_cast<std::size_t>(worker)];
            t.resize(max_temp_);
            const double coef = -2.0 * scale_ * p_[static_cast<std::size_t>(g.i * d + g.j)];
            for (const CrossSlice& slice : g.slices) {
                const std::size_t tn = product(slice.temp_extent);
                std::fill(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(tn), 0.0);
                for (const auto& [nj, in] : slice.inputs) {
                    const Block& ib = bl[in];
                    mode_product(blocks_->advection(g.m_j, nj), v.data() + ib.offset, ib.extent, g.j, t.data(), 1.0);
                }
                for (const auto& [mi, out] : slice.outputs) {
                    mode_product(blocks_->advection(mi, slice.n_i), t.data(), slice.temp_extent, g.i,
                                 w.data() + bl[out].offset, coef);
                }
            }
        });
    }
}

std::vector<double> BlockOperator::apply(const std::vector<double>& v) const {
    std::vector<double> w(v.size());
    apply(std::span<const double>(v), std::span<double>(w));
    return w;
}

BlockOperator make_cn_system(const SparseIndexSet& set, const LevelBlocks& blocks, const std::vector<double>& p,
                             double r, double tau, int threads) {
    return BlockOperator(set, blocks, p, 1.0 / tau + 0.5 * r, 0.5, threads);
}

BlockOperator make_cn_rhs(const SparseIndexSet& set, const LevelBlocks& blocks, const std::vector<double>& p,
                          double r, double tau, int threads) {
    return BlockOperator(set, blocks, p, 1.0 / tau - 0.5 * r, -0.5, threads);
}

BlockOperator make_euler_system(const SparseIndexSet& set, const LevelBlocks& blocks, const std::vector<double>& p,
                                double r, double tau, int threads) {
    return BlockOperator(set, blocks, p, 2.0 / tau + r, 1.0, threads);
}

}  // namespace orthowave
