#include "orthowave/piecewise_poly.hpp"

#include "orthowave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orthowave {

namespace {

std::vector<double> merge_breaks(std::vector<double> all) {
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    out.reserve(all.size());
    for (double t : all) {
        if (out.empty() || t - out.back() > PiecewisePoly::kBreakTolerance) out.push_back(t);
    }
    return out;
}

// Local coefficients of p about u, valid on [u, v] when that interval lies in one piece.
PiecewisePoly::Coeffs piece_about(const PiecewisePoly& p, double u, double v) {
    const double mid = 0.5 * (u + v);
    const std::ptrdiff_t i = p.locate(mid);
    if (i < 0) return {0.0, 0.0, 0.0, 0.0};
    return taylor_shift(p.local(static_cast<std::size_t>(i)), u - p.breaks()[static_cast<std::size_t>(i)]);
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Coeffs> local)
    : breaks_(std::move(breaks)), pieces_(std::move(local)) {
    if (pieces_.empty()) {
        breaks_.clear();
        return;
    }
    if (breaks_.size() != pieces_.size() + 1)
        throw std::invalid_argument("PiecewisePoly: pieces count must equal breakpoints count - 1");
    for (std::size_t i = 1; i < breaks_.size(); ++i) {
        if (!(breaks_[i] > breaks_[i - 1]))
            throw std::invalid_argument("PiecewisePoly: breakpoints must be strictly increasing");
    }
}

PiecewisePoly PiecewisePoly::from_global(std::vector<double> breaks, const std::vector<Coeffs>& global) {
    std::vector<Coeffs> local(global.size());
    for (std::size_t i = 0; i < global.size(); ++i) {
        // Global (c3, c2, c1, c0) is the local form about 0.
        const Coeffs about_zero{global[i][3], global[i][2], global[i][1], global[i][0]};
        local[i] = taylor_shift(about_zero, breaks.at(i));
    }
    return PiecewisePoly(std::move(breaks), std::move(local));
}

double PiecewisePoly::support_begin() const { return empty() ? 0.0 : breaks_.front(); }
double PiecewisePoly::support_end() const { return empty() ? 0.0 : breaks_.back(); }

std::ptrdiff_t PiecewisePoly::locate(double x) const {
    if (empty() || x < breaks_.front() || x > breaks_.back()) return -1;
    if (x == breaks_.back()) return static_cast<std::ptrdiff_t>(pieces_.size()) - 1;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<std::ptrdiff_t>(it - breaks_.begin()) - 1;
}

double PiecewisePoly::operator()(double x) const {
    const std::ptrdiff_t i = locate(x);
    if (i < 0) return 0.0;
    const auto k = static_cast<std::size_t>(i);
    return horner(pieces_[k], x - breaks_[k]);
}

PiecewisePoly::Coeffs PiecewisePoly::global(std::size_t i) const {
    const Coeffs about_zero = taylor_shift(pieces_.at(i), -breaks_[i]);
    return {about_zero[3], about_zero[2], about_zero[1], about_zero[0]};
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<Coeffs> d(pieces_.size());
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Coeffs& c = pieces_[i];
        d[i] = {c[1], 2.0 * c[2], 3.0 * c[3], 0.0};
    }
    return PiecewisePoly(breaks_, std::move(d));
}

PiecewisePoly PiecewisePoly::shifted(double s) const {
    std::vector<double> b(breaks_);
    for (double& t : b) t += s;
    return PiecewisePoly(std::move(b), pieces_);
}

PiecewisePoly PiecewisePoly::dilated(int j, double m) const {
    const double scale = std::ldexp(1.0, j);
    const double amp = std::pow(2.0, 0.5 * j);
    std::vector<double> b(breaks_);
    for (double& t : b) t = (t + m) / scale;
    std::vector<Coeffs> c(pieces_);
    for (Coeffs& q : c) {
        double f = amp;
        for (double& v : q) {
            v *= f;
            f *= scale;
        }
    }
    return PiecewisePoly(std::move(b), std::move(c));
}

PiecewisePoly PiecewisePoly::restricted(double lo, double hi) const {
    std::vector<double> b;
    std::vector<Coeffs> c;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double u = std::max(breaks_[i], lo);
        const double v = std::min(breaks_[i + 1], hi);
        if (v - u <= kBreakTolerance) continue;
        if (b.empty()) b.push_back(u);
        c.push_back(taylor_shift(pieces_[i], u - breaks_[i]));
        b.push_back(v);
    }
    return PiecewisePoly(std::move(b), std::move(c));
}

PiecewisePoly PiecewisePoly::scaled(double s) const {
    std::vector<Coeffs> c(pieces_);
    for (Coeffs& q : c)
        for (double& v : q) v *= s;
    return PiecewisePoly(breaks_, std::move(c));
}

PiecewisePoly PiecewisePoly::trimmed(double rel_tol) const {
    double scale = 0.0;
    for (const Coeffs& q : pieces_)
        for (double v : q) scale = std::max(scale, std::abs(v));
    auto negligible = [&](const Coeffs& q) {
        return std::all_of(q.begin(), q.end(), [&](double v) { return std::abs(v) <= rel_tol * scale; });
    };
    std::size_t lo = 0;
    std::size_t hi = pieces_.size();
    while (lo < hi && negligible(pieces_[lo])) ++lo;
    while (hi > lo && negligible(pieces_[hi - 1])) --hi;
    if (lo == hi) return {};
    return PiecewisePoly(std::vector<double>(breaks_.begin() + static_cast<std::ptrdiff_t>(lo),
                                             breaks_.begin() + static_cast<std::ptrdiff_t>(hi) + 1),
                         std::vector<Coeffs>(pieces_.begin() + static_cast<std::ptrdiff_t>(lo),
                                             pieces_.begin() + static_cast<std::ptrdiff_t>(hi)));
}

double PiecewisePoly::leading_coefficient() const {
    if (empty()) return 0.0;
    double scale = 0.0;
    for (const Coeffs& q : pieces_)
        for (double v : q) scale = std::max(scale, std::abs(v));
    const Coeffs& c = pieces_.front();
    for (int e = 3; e >= 0; --e) {
        if (std::abs(c[static_cast<std::size_t>(e)]) > 1e-12 * scale) return c[static_cast<std::size_t>(e)];
    }
    return 0.0;
}

PiecewisePoly::Coeffs taylor_shift(const PiecewisePoly::Coeffs& c, double delta) {
    if (delta == 0.0) return c;
    const double d2 = delta * delta;
    return {c[0] + c[1] * delta + c[2] * d2 + c[3] * d2 * delta,
            c[1] + 2.0 * c[2] * delta + 3.0 * c[3] * d2,
            c[2] + 3.0 * c[3] * delta,
            c[3]};
}

double horner(const PiecewisePoly::Coeffs& c, double t) {
    return ((c[3] * t + c[2]) * t + c[1]) * t + c[0];
}

double evaluate(const PiecewisePoly& p, double x) { return p(x); }

PiecewisePoly derivative(const PiecewisePoly& p) { return p.derivative(); }

PiecewisePoly rescale(const PiecewisePoly& p, int j, long m) {
    if (j < 0) throw std::invalid_argument("rescale: level must be non-negative");
    return p.dilated(j, static_cast<double>(m));
}

double inner_product(const PiecewisePoly& p, const PiecewisePoly& q) {
    if (p.empty() || q.empty()) return 0.0;
    const double lo = std::max(p.support_begin(), q.support_begin());
    const double hi = std::min(p.support_end(), q.support_end());
    if (hi - lo <= PiecewisePoly::kBreakTolerance) return 0.0;

    const QuadratureRule& g = gauss4();
    const auto& pb = p.breaks();
    const auto& qb = q.breaks();
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(p.locate(lo), 0));
    std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(q.locate(lo), 0));
    double u = lo;
    double sum = 0.0;
    while (hi - u > PiecewisePoly::kBreakTolerance) {
        while (i + 1 < pb.size() - 1 && pb[i + 1] - u <= PiecewisePoly::kBreakTolerance) ++i;
        while (j + 1 < qb.size() - 1 && qb[j + 1] - u <= PiecewisePoly::kBreakTolerance) ++j;
        double v = std::min({pb[i + 1], qb[j + 1], hi});
        const double h = 0.5 * (v - u);
        const double c = 0.5 * (v + u);
        double s = 0.0;
        for (int n = 0; n < g.size(); ++n) {
            const double x = c + h * g.nodes[static_cast<std::size_t>(n)];
            s += g.weights[static_cast<std::size_t>(n)] * horner(p.local(i), x - pb[i]) * horner(q.local(j), x - qb[j]);
        }
        sum += h * s;
        u = v;
    }
    return sum;
}

double l2_norm(const PiecewisePoly& p) { return std::sqrt(inner_product(p, p)); }

double moment(const PiecewisePoly& p, int m) {
    const QuadratureRule& g = gauss4();
    const int n = m <= 4 ? 4 : (m + 5) / 2;
    const QuadratureRule rule = n == 4 ? g : gauss_legendre(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.piece_count(); ++i) {
        const double u = p.breaks()[i];
        const double v = p.breaks()[i + 1];
        const double h = 0.5 * (v - u);
        const double c = 0.5 * (v + u);
        double s = 0.0;
        for (int k = 0; k < rule.size(); ++k) {
            const double x = c + h * rule.nodes[static_cast<std::size_t>(k)];
            s += rule.weights[static_cast<std::size_t>(k)] * std::pow(x, m) * horner(p.local(i), x - u);
        }
        sum += h * s;
    }
    return sum;
}

PiecewisePoly linear_combination(std::span<const double> weights, std::span<const PiecewisePoly> fs) {
    if (weights.size() != fs.size()) throw std::invalid_argument("linear_combination: size mismatch");
    std::vector<double> all;
    for (std::size_t f = 0; f < fs.size(); ++f) {
        if (weights[f] == 0.0 || fs[f].empty()) continue;
        all.insert(all.end(), fs[f].breaks().begin(), fs[f].breaks().end());
    }
    if (all.empty()) return {};
    std::vector<double> b = merge_breaks(std::move(all));
    std::vector<PiecewisePoly::Coeffs> c(b.size() - 1, PiecewisePoly::Coeffs{0.0, 0.0, 0.0, 0.0});
    for (std::size_t f = 0; f < fs.size(); ++f) {
        if (weights[f] == 0.0 || fs[f].empty()) continue;
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            if (b[i + 1] <= fs[f].support_begin() || b[i] >= fs[f].support_end()) continue;
            const PiecewisePoly::Coeffs q = piece_about(fs[f], b[i], b[i + 1]);
            for (std::size_t e = 0; e < 4; ++e) c[i][e] += weights[f] * q[e];
        }
    }
    return PiecewisePoly(std::move(b), std::move(c));
}

PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b) {
    const double w[2] = {1.0, 1.0};
    const PiecewisePoly f[2] = {a, b};
    return linear_combination(w, f);
}

PiecewisePoly operator-(const PiecewisePoly& a, const PiecewisePoly& b) {
    const double w[2] = {1.0, -1.0};
    const PiecewisePoly f[2] = {a, b};
    return linear_combination(w, f);
}

PiecewisePoly operator*(double s, const PiecewisePoly& p) { return p.scaled(s); }

double max_abs_difference(const PiecewisePoly& p, const PiecewisePoly& q) {
    const PiecewisePoly d = p - q;
    double m = 0.0;
    for (std::size_t i = 0; i < d.piece_count(); ++i) {
        const double u = d.breaks()[i];
        const double h = d.breaks()[i + 1] - u;
        for (int s = 0; s <= 8; ++s) m = std::max(m, std::abs(horner(d.local(i), h * s / 8.0)));
    }
    return m;
}

}  // namespace orthowave
