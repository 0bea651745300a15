#include "orthowave/basis1d.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace orthowave {

const char* kind_name(FunctionKind k) noexcept {
    switch (k) {
        case FunctionKind::scaling: return "scaling";
        case FunctionKind::inner_wavelet: return "inner";
        case FunctionKind::left_boundary: return "left";
        case FunctionKind::right_boundary: return "right";
    }
    return "unknown";
}

std::size_t level_block_size(int m) {
    if (m < 0) throw std::invalid_argument("level_block_size: negative level");
    return m == 0 ? 12 : 6 * (std::size_t{1} << m);
}

Basis1D::Basis1D(int max_level, bool scaling_only, std::vector<BasisFunction> functions)
    : max_level_(max_level), scaling_only_(scaling_only), functions_(std::move(functions)) {
    offsets_.assign(static_cast<std::size_t>(max_level_) + 2, 0);
    for (const BasisFunction& f : functions_) ++offsets_[static_cast<std::size_t>(f.level) + 1];
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

std::size_t Basis1D::level_size(int m) const {
    return level_offset(m + 1) - level_offset(m);
}

std::size_t Basis1D::level_offset(int m) const {
    if (m < 0 || m > max_level_ + 1) throw std::out_of_range("Basis1D: level out of range");
    return offsets_[static_cast<std::size_t>(m)];
}

std::span<const BasisFunction> Basis1D::level(int m) const {
    return std::span<const BasisFunction>(functions_).subspan(level_offset(m), level_size(m));
}

Basis1D build_basis(const GeneratorSet& g, int k, bool scaling_only) {
    if (k < 0) throw std::invalid_argument("build_basis: level must be non-negative");
    if (!g.has_wavelets || !g.has_boundary) throw std::invalid_argument("build_basis: generators incomplete");
    std::vector<BasisFunction> fs;
    const PiecewisePoly scaling[6] = {g.phi_left, g.phi[0], g.phi[1], g.phi[2], g.phi[3], g.phi_right};
    for (int i = 0; i < 6; ++i) fs.push_back({0, i - 5, FunctionKind::scaling, scaling[i]});
    if (scaling_only) return Basis1D(0, true, std::move(fs));

    for (int j = 0; j <= k; ++j) {
        const int count = 1 << j;
        int t = 1;
        auto add = [&](FunctionKind kind, const PiecewisePoly& shape, double shift) {
            fs.push_back({j, t++, kind, shape.dilated(j, shift)});
        };
        add(FunctionKind::left_boundary, g.psi_left[0], 0.0);
        add(FunctionKind::left_boundary, g.psi_left[1], 0.0);
        for (int pos = 0; pos < count; ++pos) {
            add(FunctionKind::inner_wavelet, g.psi[0], pos);
            add(FunctionKind::inner_wavelet, g.psi[1], pos);
            if (pos + 1 < count) {
                for (std::size_t l = 2; l < 6; ++l) add(FunctionKind::inner_wavelet, g.psi[l], pos + 1);
            }
        }
        add(FunctionKind::right_boundary, g.psi_right[0], count - 1);
        add(FunctionKind::right_boundary, g.psi_right[1], count - 1);
    }
    return Basis1D(k, false, std::move(fs));
}

namespace {

bool overlap(const PiecewisePoly& a, const PiecewisePoly& b) {
    return std::min(a.support_end(), b.support_end()) - std::max(a.support_begin(), b.support_begin()) >
           PiecewisePoly::kBreakTolerance;
}

// Level-q Hermite functions restricted to [0, 1] whose support meets [lo, hi].
std::vector<PiecewisePoly> hermite_frame(int q, double lo, double hi) {
    static const PiecewisePoly xi1 = hermite_xi1();
    static const PiecewisePoly xi2 = hermite_xi2();
    const long n = 1L << q;
    const long k0 = std::max(0L, static_cast<long>(std::floor(lo * n)) - 1);
    const long k1 = std::min(n, static_cast<long>(std::ceil(hi * n)) + 1);
    std::vector<PiecewisePoly> out;
    for (long k = k0; k <= k1; ++k) {
        for (const PiecewisePoly* xi : {&xi1, &xi2}) {
            PiecewisePoly h = rescale(*xi, q, k).restricted(0.0, 1.0);
            if (!h.empty() && h.support_end() > lo && h.support_begin() < hi) out.push_back(std::move(h));
        }
    }
    return out;
}

double two_scale_distance(const PiecewisePoly& f, int q) {
    const std::vector<PiecewisePoly> frame = hermite_frame(q, f.support_begin(), f.support_end());
    const auto n = static_cast<Eigen::Index>(frame.size());
    Eigen::MatrixXd gram(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rhs(i) = inner_product(frame[static_cast<std::size_t>(i)], f);
        for (Eigen::Index j = 0; j <= i; ++j)
            gram(i, j) = gram(j, i) =
                inner_product(frame[static_cast<std::size_t>(i)], frame[static_cast<std::size_t>(j)]);
    }
    const Eigen::VectorXd c = gram.ldlt().solve(rhs);
    std::vector<double> w(c.data(), c.data() + c.size());
    const PiecewisePoly fit = linear_combination(w, frame);
    return l2_norm(f - fit);
}

}  // namespace

bool BasisReport::pass() const { return first_failure() == nullptr; }

const Check* BasisReport::first_failure() const {
    for (const Check& c : checks)
        if (!c.pass()) return &c;
    return nullptr;
}

BasisReport verify_basis(const Basis1D& b) {
    BasisReport r;
    const auto& fs = b.functions();
    const std::size_t n = fs.size();

    Eigen::MatrixXd h1(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<PiecewisePoly> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = fs[i].shape.derivative();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double ip = 0.0;
            double dp = 0.0;
            if (overlap(fs[i].shape, fs[j].shape)) {
                ip = inner_product(fs[i].shape, fs[j].shape);
                dp = inner_product(d[i], d[j]);
            }
            r.gram_residual = std::max(r.gram_residual, std::abs(ip - (i == j ? 1.0 : 0.0)));
            h1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dp;
            h1(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = dp;
        }
    }
    const Eigen::VectorXd scale = h1.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd normalized = scale.asDiagonal() * h1 * scale.asDiagonal();
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(normalized).eigenvalues();
    r.h1_condition = ev(ev.size() - 1) / ev(0);

    for (const BasisFunction& f : fs) {
        r.boundary_residual = std::max({r.boundary_residual, std::abs(f.shape(0.0)), std::abs(f.shape(1.0))});
        const double diam = f.shape.support_end() - f.shape.support_begin();
        const double limit = std::ldexp(1.0, 1 - f.level);
        r.support_excess = std::max({r.support_excess, diam - limit, -f.shape.support_begin(),
                                     f.shape.support_end() - 1.0});
        if (f.kind == FunctionKind::inner_wavelet) {
            for (int m = 0; m <= 3; ++m) r.moment_residual = std::max(r.moment_residual, std::abs(moment(f.shape, m)));
        }
        const int q = f.kind == FunctionKind::scaling ? 2 : f.level + 3;
        r.two_scale_residual = std::max(r.two_scale_residual, two_scale_distance(f.shape, q));
    }

    r.checks = {
        {"gram_identity", r.gram_residual, 1e-8},
        {"vanishing_moments", r.moment_residual, 1e-10},
        {"boundary_values", r.boundary_residual, 1e-10},
        {"support_diameter", std::max(r.support_excess, 0.0), 1e-14},
        {"two_scale_membership", r.two_scale_residual, 1e-8},
        {"h1_condition_finite", std::isfinite(r.h1_condition) ? 0.0 : std::numeric_limits<double>::infinity(), 0.0},
    };
    return r;
}

std::string report_csv(const BasisReport& r) {
    std::ostringstream out;
    out.precision(6);
    out << std::scientific;
    out << "check,residual,tolerance,pass\n";
    for (const Check& c : r.checks)
        out << c.name << ',' << c.residual << ',' << c.tolerance << ',' << (c.pass() ? "true" : "false") << '\n';
    out << "h1_condition," << r.h1_condition << ",inf,true\n";
    return out.str();
}

}  // namespace orthowave
