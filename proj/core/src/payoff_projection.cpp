#include "orthowave/payoff_projection.hpp"

#include "orthowave/errors.hpp"
#include "orthowave/level_blocks.hpp"
#include "orthowave/parallel.hpp"
#include "orthowave/quadrature.hpp"
#include "tensor_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace orthowave {

namespace {

using Moments = std::array<double, 4>;
using CellMoments = std::function<void(const std::vector<std::size_t>&, std::span<double>)>;

constexpr int kCellShift = 3;

double cell_width(int m) { return std::ldexp(1.0, -(m + kCellShift)); }
std::size_t cell_count(int m) { return std::size_t{1} << (m + kCellShift); }

std::size_t ipow4(int n) { return std::size_t{1} << (2 * n); }

// Row lambda, column 4c + e: coefficient of t^e of f_lambda on cell c, t measured from the cell start.
CsrMatrix cell_matrix(std::span<const BasisFunction> fs, int m) {
    const std::size_t cells = cell_count(m);
    const double h = cell_width(m);
    DenseMatrix a(fs.size(), 4 * cells);
    for (std::size_t l = 0; l < fs.size(); ++l) {
        const PiecewisePoly& p = fs[l].shape;
        for (std::size_t c = 0; c < cells; ++c) {
            const double left = static_cast<double>(c) * h;
            const std::ptrdiff_t i = p.locate(left + 0.5 * h);
            if (i < 0) continue;
            const auto iu = static_cast<std::size_t>(i);
            const double tol = 1e-12;
            if (p.breaks()[iu] > left + tol || p.breaks()[iu + 1] < left + h - tol)
                throw StageError(Stage::assembly, "payoff projection: basis pieces are not aligned with cells");
            const Moments coef = taylor_shift(p.local(iu), left - p.breaks()[iu]);
            for (std::size_t e = 0; e < 4; ++e) a(l, 4 * c + e) = coef[e];
        }
    }
    return CsrMatrix::from_dense(a);
}

const QuadratureRule& gauss16() {
    static const QuadratureRule rule = gauss_legendre(16);
    return rule;
}

// Integrals of t^e exp(w t) over [lo, hi].
Moments exp_moments(double w, double lo, double hi) {
    const QuadratureRule& g = gauss16();
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    Moments out{};
    for (int q = 0; q < g.size(); ++q) {
        const double t = mid + half * g.nodes[static_cast<std::size_t>(q)];
        double v = half * g.weights[static_cast<std::size_t>(q)] * std::exp(w * t);
        for (double& o : out) {
            o += v;
            v *= t;
        }
    }
    return out;
}

Moments power_moments(double lo, double hi) {
    Moments out{};
    double a = lo;
    double b = hi;
    for (std::size_t e = 0; e < 4; ++e) {
        out[e] = (b - a) / static_cast<double>(e + 1);
        a *= lo;
        b *= hi;
    }
    return out;
}

std::vector<double> outer_product(const std::vector<Moments>& m, std::size_t from) {
    std::vector<double> t{1.0};
    for (std::size_t b = from; b < m.size(); ++b) {
        std::vector<double> next(t.size() * 4);
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t e = 0; e < 4; ++e) next[i * 4 + e] = t[i] * m[b][e];
        t = std::move(next);
    }
    return t;
}

// Moments of the payoff over a cell; the kink hyperplane is resolved by splitting the
// outer directions at every corner crossing and the innermost direction exactly.
class KinkIntegrator {
public:
    KinkIntegrator(const ExpLinearPayoff& u, std::vector<double> h, int points)
        : u_(u), h_(std::move(h)), rule_(gauss_legendre(points)) {
        const std::size_t d = h_.size();
        kappa_ = std::log(u.strike);
        sign_ = u.call ? -1.0 : 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            full_p_.push_back(power_moments(0.0, h_[i]));
            full_e_.push_back(exp_moments(u.slope[i], 0.0, h_[i]));
        }
        for (std::size_t a = 0; a < d; ++a) {
            prod_p_.push_back(outer_product(full_p_, a + 1));
            prod_e_.push_back(outer_product(full_e_, a + 1));
            std::vector<double> sums{0.0};
            double reach = 0.0;
            for (std::size_t b = a + 1; b < d; ++b) {
                const std::size_t n = sums.size();
                for (std::size_t i = 0; i < n; ++i) sums.push_back(sums[i] + u.slope[b] * h_[b]);
                reach += u.slope[b] * h_[b];
            }
            corner_sums_.push_back(std::move(sums));
            reach_.push_back(reach);
            scratch_.emplace_back(ipow4(static_cast<int>(d - a - 1)));
        }
        full_p0_ = outer_product(full_p_, 0);
        full_e0_ = outer_product(full_e_, 0);
    }

    void operator()(const std::vector<std::size_t>& cell, std::span<double> mom) {
        const std::size_t d = h_.size();
        double base = u_.offset;
        double reach = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            base += u_.slope[i] * static_cast<double>(cell[i]) * h_[i];
            reach += u_.slope[i] * h_[i];
        }
        std::fill(mom.begin(), mom.end(), 0.0);
        switch (classify(base, base + reach)) {
            case Region::inactive:
                return;
            case Region::active: {
                const double eb = std::exp(base);
                for (std::size_t j = 0; j < mom.size(); ++j)
                    mom[j] = sign_ * (u_.strike * full_p0_[j] - eb * full_e0_[j]);
                return;
            }
            case Region::cut:
                recurse(0, base, mom.data());
        }
    }

private:
    enum class Region { inactive, active, cut };

    Region classify(double lo, double hi) const {
        if (!u_.call) {
            if (hi <= kappa_) return Region::active;
            if (lo >= kappa_) return Region::inactive;
        } else {
            if (lo >= kappa_) return Region::active;
            if (hi <= kappa_) return Region::inactive;
        }
        return Region::cut;
    }

    void recurse(std::size_t a, double ell, double* out) {
        const std::size_t d = h_.size();
        const double w = u_.slope[a];
        const double h = h_[a];
        if (a + 1 == d) {
            const double cross = std::clamp((kappa_ - ell) / w, 0.0, h);
            const double lo = u_.call ? cross : 0.0;
            const double hi = u_.call ? h : cross;
            if (hi <= lo) return;
            const Moments p = power_moments(lo, hi);
            const Moments e = exp_moments(w, lo, hi);
            const double el = std::exp(ell);
            for (std::size_t k = 0; k < 4; ++k) out[k] += sign_ * (u_.strike * p[k] - el * e[k]);
            return;
        }
        std::vector<double> cuts{0.0, h};
        for (double cs : corner_sums_[a]) {
            const double t = (kappa_ - ell - cs) / w;
            if (t > 0.0 && t < h) cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());
        const std::size_t rest = prod_p_[a].size();
        std::vector<double>& sub = scratch_[a];
        for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
            const double p0 = cuts[piece];
            const double p1 = cuts[piece + 1];
            if (p1 - p0 <= 1e-15 * h) continue;
            const double lo = ell + w * 0.5 * (p0 + p1);
            const Region region = classify(lo, lo + reach_[a]);
            if (region == Region::inactive) continue;
            if (region == Region::active) {
                const Moments pp = power_moments(p0, p1);
                const Moments pe = exp_moments(w, p0, p1);
                const double el = std::exp(ell);
                for (std::size_t k = 0; k < 4; ++k)
                    for (std::size_t j = 0; j < rest; ++j)
                        out[k * rest + j] +=
                            sign_ * (u_.strike * pp[k] * prod_p_[a][j] - el * pe[k] * prod_e_[a][j]);
                continue;
            }
            const double half = 0.5 * (p1 - p0);
            const double mid = 0.5 * (p1 + p0);
            for (int q = 0; q < rule_.size(); ++q) {
                const double t = mid + half * rule_.nodes[static_cast<std::size_t>(q)];
                std::fill(sub.begin(), sub.end(), 0.0);
                recurse(a + 1, ell + w * t, sub.data());
                double f = half * rule_.weights[static_cast<std::size_t>(q)];
                for (std::size_t k = 0; k < 4; ++k) {
                    for (std::size_t j = 0; j < rest; ++j) out[k * rest + j] += f * sub[j];
                    f *= t;
                }
            }
        }
    }

    const ExpLinearPayoff& u_;
    std::vector<double> h_;
    QuadratureRule rule_;
    double kappa_ = 0.0;
    double sign_ = 1.0;
    std::vector<Moments> full_p_;
    std::vector<Moments> full_e_;
    std::vector<double> full_p0_;
    std::vector<double> full_e0_;
    std::vector<std::vector<double>> prod_p_;
    std::vector<std::vector<double>> prod_e_;
    std::vector<std::vector<double>> corner_sums_;
    std::vector<double> reach_;
    std::vector<std::vector<double>> scratch_;
};

// Contracts cell moments of one block with the per-axis cell matrices, one slab of
// axis-0 cells at a time.
void project_block(const Block& b, const std::vector<CsrMatrix>& phi, CellMoments moments, double* out) {
    const std::size_t d = b.level.size();
    std::vector<std::size_t> cells(d);
    for (std::size_t i = 0; i < d; ++i) cells[i] = phi[i].cols / 4;
    std::vector<std::size_t> ext(d);
    ext[0] = 4;
    for (std::size_t i = 1; i < d; ++i) ext[i] = 4 * cells[i];
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t i = d - 1; i > 0; --i) stride[i - 1] = stride[i] * ext[i];
    const std::size_t slab_size = detail::product(ext);
    const std::size_t nmom = ipow4(static_cast<int>(d));

    std::vector<double> slab(slab_size);
    std::vector<double> mom(nmom);
    std::vector<std::size_t> cell(d, 0);
    std::size_t rest = 1;
    std::size_t inner_cells = 1;
    for (std::size_t i = 1; i < d; ++i) {
        rest *= b.extent[i];
        inner_cells *= cells[i];
    }

    for (std::size_t c0 = 0; c0 < cells[0]; ++c0) {
        std::fill(slab.begin(), slab.end(), 0.0);
        bool any = false;
        cell[0] = c0;
        for (std::size_t flat = 0; flat < inner_cells; ++flat) {
            std::size_t code = flat;
            for (std::size_t i = d; i-- > 1;) {
                cell[i] = code % cells[i];
                code /= cells[i];
            }
            moments(cell, mom);
            if (std::none_of(mom.begin(), mom.end(), [](double v) { return v != 0.0; })) continue;
            any = true;
            for (std::size_t e = 0; e < nmom; ++e) {
                std::size_t idx = 0;
                std::size_t ecode = e;
                for (std::size_t i = d; i-- > 0;) {
                    const std::size_t ei = ecode % 4;
                    ecode /= 4;
                    idx += (i == 0 ? ei : 4 * cell[i] + ei) * stride[i];
                }
                slab[idx] = mom[e];
            }
        }
        if (!any) continue;

        std::vector<double> cur = std::move(slab);
        std::vector<std::size_t> cur_ext = ext;
        for (std::size_t i = 1; i < d; ++i) {
            std::vector<std::size_t> next_ext = cur_ext;
            next_ext[i] = phi[i].rows;
            std::vector<double> next(detail::product(next_ext), 0.0);
            detail::mode_product(phi[i], cur.data(), cur_ext, static_cast<int>(i), next.data(), 1.0);
            cur = std::move(next);
            cur_ext = std::move(next_ext);
        }
        const CsrMatrix& p0 = phi[0];
        for (std::size_t l = 0; l < p0.rows; ++l) {
            for (std::size_t p = p0.row_ptr[l]; p < p0.row_ptr[l + 1]; ++p) {
                const std::size_t col = p0.col[p];
                if (col / 4 != c0) continue;
                const double v = p0.val[p];
                const double* src = cur.data() + (col % 4) * rest;
                double* dst = out + l * rest;
                for (std::size_t j = 0; j < rest; ++j) dst[j] += v * src[j];
            }
        }
        slab.assign(slab_size, 0.0);
    }
}

template <class MakeMoments>
std::vector<double> project_blocks(const SparseIndexSet& set, const Basis1D& basis, int threads,
                                   MakeMoments make_moments) {
    const int k = set.level();
    if (basis.max_level() < k) throw std::invalid_argument("projection: basis has fewer levels than the index set");
    std::vector<CsrMatrix> level_phi;
    for (int m = 0; m <= k; ++m) {
        if (basis.level_size(m) != set.level_sizes()[static_cast<std::size_t>(m)])
            throw std::invalid_argument("projection: basis level sizes do not match the index set");
        level_phi.push_back(cell_matrix(basis.level(m), m));
    }
    std::vector<double> out(set.total_count(), 0.0);
    const auto& blocks = set.blocks();
    parallel_for(blocks.size(), threads, [&](std::size_t bi, int) {
        const Block& b = blocks[bi];
        std::vector<CsrMatrix> phi;
        std::vector<double> h;
        for (int m : b.level) {
            phi.push_back(level_phi[static_cast<std::size_t>(m)]);
            h.push_back(cell_width(m));
        }
        project_block(b, phi, make_moments(h), out.data() + b.offset);
    });
    return out;
}

}  // namespace

double ExpLinearPayoff::operator()(std::span<const double> z) const {
    double l = offset;
    for (std::size_t i = 0; i < z.size(); ++i) l += slope[i] * z[i];
    const double g = std::exp(l);
    return call ? std::max(g - strike, 0.0) : std::max(strike - g, 0.0);
}

int default_kink_points(int d) noexcept { return d <= 4 ? 8 : 6; }

std::vector<double> project_payoff(const ExpLinearPayoff& u, const SparseIndexSet& set, const Basis1D& basis,
                                   const ProjectionOptions& opt) {
    if (u.slope.size() != static_cast<std::size_t>(set.dim()))
        throw std::invalid_argument("project_payoff: slope size must equal the dimension");
    if (std::any_of(u.slope.begin(), u.slope.end(), [](double w) { return !(w > 0.0); }))
        throw std::invalid_argument("project_payoff: slopes must be positive");
    if (!(u.strike > 0.0)) throw std::invalid_argument("project_payoff: strike must be positive");
    const int points = opt.kink_points > 0 ? opt.kink_points : default_kink_points(set.dim());
    return project_blocks(set, basis, opt.threads, [&](std::vector<double> h) -> CellMoments {
        auto integrator = std::make_shared<KinkIntegrator>(u, std::move(h), points);
        return [integrator](const std::vector<std::size_t>& c, std::span<double> m) { (*integrator)(c, m); };
    });
}

std::vector<double> project_function(const std::function<double(std::span<const double>)>& u,
                                     const SparseIndexSet& set, const Basis1D& basis, int extra_levels, int points,
                                     int threads) {
    const QuadratureRule rule = gauss_legendre(points);
    const std::size_t d = static_cast<std::size_t>(set.dim());
    return project_blocks(set, basis, threads, [&](std::vector<double> h) -> CellMoments {
        // Per axis: offsets t within a cell and weights of the composite rule.
        std::vector<std::vector<std::pair<double, double>>> nodes(d);
        const std::size_t sub = std::size_t{1} << extra_levels;
        for (std::size_t i = 0; i < d; ++i) {
            const double hs = h[i] / static_cast<double>(sub);
            for (std::size_t s = 0; s < sub; ++s)
                for (std::size_t q = 0; q < static_cast<std::size_t>(rule.size()); ++q)
                    nodes[i].emplace_back(hs * (static_cast<double>(s) + 0.5 * (1.0 + rule.nodes[q])),
                                          0.5 * hs * rule.weights[q]);
        }
        return [nodes, h, d, &u](const std::vector<std::size_t>& c, std::span<double> m) {
            std::fill(m.begin(), m.end(), 0.0);
            std::vector<std::size_t> q(d, 0);
            std::vector<double> z(d);
            std::vector<double> part(m.size());
            const std::size_t per_axis = nodes[0].size();
            while (true) {
                double w = 1.0;
                for (std::size_t i = 0; i < d; ++i) {
                    z[i] = static_cast<double>(c[i]) * h[i] + nodes[i][q[i]].first;
                    w *= nodes[i][q[i]].second;
                }
                const double f = w * u(z);
                if (f != 0.0) {
                    for (std::size_t e = 0; e < m.size(); ++e) {
                        double v = f;
                        std::size_t code = e;
                        for (std::size_t i = d; i-- > 0;) {
                            v *= std::pow(nodes[i][q[i]].first, static_cast<double>(code % 4));
                            code /= 4;
                        }
                        m[e] += v;
                    }
                }
                std::size_t i = d;
                while (i > 0) {
                    --i;
                    if (++q[i] < per_axis) break;
                    q[i] = 0;
                    if (i == 0) return;
                }
            }
        };
    });
}

}  // namespace orthowave
