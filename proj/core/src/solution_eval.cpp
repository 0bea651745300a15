#include "orthowave/solution_eval.hpp"

#include "orthowave/errors.hpp"

#include <utility>

namespace orthowave {

double evaluate_expansion(std::span<const double> c, const SparseIndexSet& set, const Basis1D& basis,
                          std::span<const double> z) {
    const auto d = static_cast<std::size_t>(set.dim());
    if (z.size() != d) throw StageError(Stage::evaluate, "evaluate_expansion: point has the wrong dimension");
    if (c.size() != set.total_count())
        throw StageError(Stage::evaluate, "evaluate_expansion: coefficient size mismatch");
    const int k = set.level();

    // Nonzero (position, value) pairs per axis and level.
    std::vector<std::vector<std::vector<std::pair<std::size_t, double>>>> vals(d);
    for (std::size_t i = 0; i < d; ++i) {
        vals[i].resize(static_cast<std::size_t>(k) + 1);
        for (int m = 0; m <= k; ++m) {
            const auto fs = basis.level(m);
            for (std::size_t l = 0; l < fs.size(); ++l) {
                const PiecewisePoly& p = fs[l].shape;
                if (z[i] < p.support_begin() || z[i] > p.support_end()) continue;
                const double v = p(z[i]);
                if (v != 0.0) vals[i][static_cast<std::size_t>(m)].emplace_back(l, v);
            }
        }
    }

    double sum = 0.0;
    std::vector<std::size_t> q(d);
    for (const Block& b : set.blocks()) {
        std::vector<const std::vector<std::pair<std::size_t, double>>*> lists(d);
        bool empty = false;
        for (std::size_t i = 0; i < d; ++i) {
            lists[i] = &vals[i][static_cast<std::size_t>(b.level[i])];
            empty = empty || lists[i]->empty();
        }
        if (empty) continue;
        std::fill(q.begin(), q.end(), 0);
        while (true) {
            std::size_t idx = 0;
            double w = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                const auto& [pos, v] = (*lists[i])[q[i]];
                idx = idx * b.extent[i] + pos;
                w *= v;
            }
            sum += w * c[b.offset + idx];
            std::size_t i = d;
            while (i > 0) {
                --i;
                if (++q[i] < lists[i]->size()) break;
                q[i] = 0;
                if (i == 0) goto next_block;
            }
        }
    next_block:;
    }
    return sum;
}

double evaluate_solution_at_prices(std::span<const double> c, const SparseIndexSet& set, const Basis1D& basis,
                                   const MarketParams& m, const DomainSpec& dom, std::span<const double> s,
                                   double t) {
    if (s.size() != static_cast<std::size_t>(m.d)) throw StageError(Stage::evaluate, "need one price per asset");
    for (double v : s)
        if (!(v > 0.0)) throw StageError(Stage::evaluate, "prices must be positive");
    const std::vector<double> z = prices_to_cube(m, dom, s, t);
    for (double zi : z)
        if (!(zi > 0.0 && zi < 1.0))
            throw StageError(Stage::evaluate, "price point maps outside the unit cube; enlarge the domain");
    return evaluate_expansion(c, set, basis, z);
}

}  // namespace orthowave
