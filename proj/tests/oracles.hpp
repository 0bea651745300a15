#pragma once

#include "orthowave/basis1d.hpp"
#include "orthowave/generators.hpp"
#include "orthowave/market.hpp"
#include "orthowave/quadrature.hpp"
#include "orthowave/sparse_grid.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Generator set built once per test binary.
inline const orthowave::GeneratorSet& generators() {
    static const orthowave::GeneratorSet g = orthowave::build_generator_set(orthowave::default_generator_file());
    return g;
}

inline std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

/// Values and derivatives of every 1D basis function at composite 4-point Gauss nodes
/// on cells of width 2^-cell_level, which resolve all polynomial pieces.
struct Tabulation {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<std::vector<double>> value;  // [function][node]
    std::vector<std::vector<double>> slope;
};

inline Tabulation tabulate(const orthowave::Basis1D& b, int cell_level) {
    Tabulation t;
    const auto& g = orthowave::gauss4();
    const int cells = 1 << cell_level;
    const double h = 1.0 / cells;
    for (int c = 0; c < cells; ++c)
        for (int q = 0; q < 4; ++q) {
            t.nodes.push_back(h * (c + 0.5 * (1.0 + g.nodes[q])));
            t.weights.push_back(0.5 * h * g.weights[q]);
        }
    for (const auto& f : b.functions()) {
        const orthowave::PiecewisePoly df = f.shape.derivative();
        std::vector<double> v, s;
        for (double x : t.nodes) {
            v.push_back(f.shape(x));
            s.push_back(df(x));
        }
        t.value.push_back(std::move(v));
        t.slope.push_back(std::move(s));
    }
    return t;
}

/// Global 1D basis index of a (level, position-in-level) pair.
inline std::size_t basis_index(const orthowave::Basis1D& b, int level, std::size_t pos) {
    return b.level_offset(level) + pos;
}

// Independent count: sum over all level vectors with |m| <= k of the block sizes.
inline std::uint64_t brute_force_count(int d, int k) {
    std::function<std::uint64_t(int, int)> rec = [&](int dim, int budget) -> std::uint64_t {
        if (dim == 0) return 1;
        std::uint64_t total = 0;
        for (int m = 0; m <= budget; ++m) {
            const std::uint64_t s = m == 0 ? 12 : 6ull << m;
            total += s * rec(dim - 1, budget - m);
        }
        return total;
    };
    return rec(d, k);
}

// Brute-force (A v) for d = 2 by tensor Gauss quadrature of
// alpha <u, psi> + s sum_ij P_ij <d_j u, d_i psi> with u = sum v_mu psi_mu.
inline std::vector<double> quadrature_apply_2d(const orthowave::SparseIndexSet& set, const orthowave::Basis1D& b,
                                               const std::vector<double>& p, double alpha, double s,
                                               const std::vector<double>& v) {
    const Tabulation t = tabulate(b, set.level() + 3);
    const std::size_t q = t.nodes.size();
    std::vector<double> u(q * q, 0.0), ux(q * q, 0.0), uy(q * q, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> fn;  // 1D indices of every unknown
    for (const orthowave::Block& blk : set.blocks())
        for (std::size_t a = 0; a < blk.extent[0]; ++a)
            for (std::size_t c = 0; c < blk.extent[1]; ++c)
                fn.emplace_back(basis_index(b, blk.level[0], a), basis_index(b, blk.level[1], c));
    for (std::size_t n = 0; n < fn.size(); ++n) {
        const auto& [a, c] = fn[n];
        for (std::size_t i = 0; i < q; ++i) {
            if (t.value[a][i] == 0.0 && t.slope[a][i] == 0.0) continue;
            for (std::size_t j = 0; j < q; ++j) {
                u[i * q + j] += v[n] * t.value[a][i] * t.value[c][j];
                ux[i * q + j] += v[n] * t.slope[a][i] * t.value[c][j];
                uy[i * q + j] += v[n] * t.value[a][i] * t.slope[c][j];
            }
        }
    }
    std::vector<double> w(fn.size(), 0.0);
    for (std::size_t n = 0; n < fn.size(); ++n) {
        const auto& [a, c] = fn[n];
        double acc = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            if (t.value[a][i] == 0.0 && t.slope[a][i] == 0.0) continue;
            for (std::size_t j = 0; j < q; ++j) {
                const double wt = t.weights[i] * t.weights[j];
                const double f = t.value[a][i] * t.value[c][j];
                const double fx = t.slope[a][i] * t.value[c][j];
                const double fy = t.value[a][i] * t.slope[c][j];
                const std::size_t k = i * q + j;
                acc += wt * (alpha * f * u[k] +
                             s * (p[0] * fx * ux[k] + p[1] * fx * uy[k] + p[2] * fy * ux[k] + p[3] * fy * uy[k]));
            }
        }
        w[n] = acc;
    }
    return w;
}

/// Scalar Black-Scholes put with continuous dividend yield q, written out independently.
inline double bs_put(double s, double k, double r, double q, double sigma, double t) {
    const double sq = sigma * std::sqrt(t);
    const double d1 = (std::log(s / k) + (r - q + 0.5 * sigma * sigma) * t) / sq;
    const double d2 = d1 - sq;
    auto phi = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
    return k * std::exp(-r * t) * phi(-d2) - s * std::exp(-q * t) * phi(-d1);
}

inline double bs_call(double s, double k, double r, double q, double sigma, double t) {
    const double sq = sigma * std::sqrt(t);
    const double d1 = (std::log(s / k) + (r - q + 0.5 * sigma * sigma) * t) / sq;
    const double d2 = d1 - sq;
    auto phi = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
    return s * std::exp(-q * t) * phi(d1) - k * std::exp(-r * t) * phi(d2);
}

/// Geometric-average price from its lognormal law: variance (1/d^2) sum rho_ij s_i s_j,
/// yield (1/d) sum s_i^2 / 2 - variance / 2.
inline double reference_geometric(bool call, const orthowave::MarketParams& m, const std::vector<double>& s, double t) {
    const int d = m.d;
    double var = 0.0, half = 0.0, logsum = 0.0;
    for (int i = 0; i < d; ++i) {
        half += 0.5 * m.sigma[i] * m.sigma[i] / d;
        logsum += std::log(s[i]) / d;
        for (int j = 0; j < d; ++j) var += m.correlation(i, j) * m.sigma[i] * m.sigma[j] / (d * d);
    }
    const double q = half - 0.5 * var;
    const double g = std::exp(logsum);
    return call ? bs_call(g, m.strike, m.r, q, std::sqrt(var), t) : bs_put(g, m.strike, m.r, q, std::sqrt(var), t);
}

}  // namespace oracle
