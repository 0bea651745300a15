#include "orthowave/reconstruct.hpp"

#include "dense_linalg.hpp"
#include "orthowave/errors.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <random>

namespace orthowave {

namespace {

using detail::gram_schmidt;

// xi_{j, 2k + l - 1} = 2^{j/2} xi_l(2^j x - k).
PiecewisePoly xi(int j, int idx) {
    static const PiecewisePoly xi1 = hermite_xi1();
    static const PiecewisePoly xi2 = hermite_xi2();
    const int k = static_cast<int>(std::floor(idx / 2.0));
    const int l = idx - 2 * k + 1;
    return rescale(l == 1 ? xi1 : xi2, j, k);
}

PiecewisePoly project_out(PiecewisePoly f, const std::vector<PiecewisePoly>& onto) {
    std::vector<double> w;
    for (const PiecewisePoly& o : onto) w.push_back(inner_product(f, o));
    for (std::size_t i = 0; i < onto.size(); ++i) f = f - w[i] * onto[i];
    return f;
}

// Residuals of the orthogonality conditions between projected boundary spaces
// and of the orthonormality of the two coefficient rows; padded with a zero row
// so the solver sees a square system.
struct QuadraticSystem : Eigen::DenseFunctor<double> {
    Eigen::Matrix4d a;   // a(i, j) = <c_i, v_j>
    Eigen::Matrix4d cc;  // <c_i, c_k>

    QuadraticSystem() : Eigen::DenseFunctor<double>(8, 8) {}

    int operator()(const Eigen::VectorXd& s, Eigen::VectorXd& f) const {
        const Eigen::Vector4d s1 = s.head<4>();
        const Eigen::Vector4d s2 = s.tail<4>();
        const Eigen::Vector4d u1 = a * s1;
        const Eigen::Vector4d u2 = a * s2;
        int r = 0;
        for (int i = 0; i < 2; ++i)
            for (int k = 2; k < 4; ++k) f(r++) = cc(i, k) - u1(i) * u1(k) - u2(i) * u2(k);
        f(r++) = s1.squaredNorm() - 1.0;
        f(r++) = s2.squaredNorm() - 1.0;
        f(r++) = s1.dot(s2);
        f(r) = 0.0;
        return 0;
    }

    int df(const Eigen::VectorXd& s, Eigen::MatrixXd& jac) const {
        const Eigen::Vector4d s1 = s.head<4>();
        const Eigen::Vector4d s2 = s.tail<4>();
        const Eigen::Vector4d u1 = a * s1;
        const Eigen::Vector4d u2 = a * s2;
        jac.setZero();
        int r = 0;
        for (int i = 0; i < 2; ++i) {
            for (int k = 2; k < 4; ++k) {
                for (int j = 0; j < 4; ++j) {
                    jac(r, j) = -(a(i, j) * u1(k) + u1(i) * a(k, j));
                    jac(r, 4 + j) = -(a(i, j) * u2(k) + u2(i) * a(k, j));
                }
                ++r;
            }
        }
        for (int j = 0; j < 4; ++j) {
            jac(r, j) = 2.0 * s1(j);
            jac(r + 1, 4 + j) = 2.0 * s2(j);
            jac(r + 2, j) = s2(j);
            jac(r + 2, 4 + j) = s1(j);
        }
        return 0;
    }
};

double hermite_span_distance(const PiecewisePoly& f) {
    std::vector<PiecewisePoly> frame;
    for (int idx = -10; idx <= 10; ++idx) {
        PiecewisePoly h = xi(2, idx);
        if (h.support_end() > f.support_begin() && h.support_begin() < f.support_end()) frame.push_back(h);
    }
    const auto n = static_cast<Eigen::Index>(frame.size());
    Eigen::MatrixXd gram(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rhs(i) = inner_product(frame[static_cast<std::size_t>(i)], f);
        for (Eigen::Index j = 0; j < n; ++j)
            gram(i, j) = inner_product(frame[static_cast<std::size_t>(i)], frame[static_cast<std::size_t>(j)]);
    }
    const Eigen::VectorXd c = gram.ldlt().solve(rhs);
    std::vector<double> w(c.data(), c.data() + c.size());
    return l2_norm(f - linear_combination(w, frame));
}

}  // namespace

GeneratorSet reconstruct_scaling_generators(ReconstructionReport* report, std::uint64_t seed, int max_attempts) {
    ReconstructionReport rep;
    const auto basis01 = gram_schmidt({xi(1, 2), xi(1, 3)});
    const PiecewisePoly& phi1 = basis01[0];
    const PiecewisePoly& phi2 = basis01[1];

    Eigen::MatrixXd c(2, 6);
    std::vector<PiecewisePoly> fine;
    for (int j = 1; j <= 6; ++j) fine.push_back(xi(2, j + 1));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 6; ++j) c(i, j) = inner_product(xi(1, i + 2), fine[static_cast<std::size_t>(j)]);
    const detail::NullSpace nc = detail::null_space(c);
    rep.null_c_dim = static_cast<int>(nc.basis.cols());
    if (rep.null_c_dim != 4) throw StageError(Stage::basis, "null space of C must be four dimensional");
    std::vector<PiecewisePoly> w;
    for (Eigen::Index i = 0; i < 4; ++i) w.push_back(detail::combine(nc.basis, i, fine));
    const std::vector<PiecewisePoly> v = gram_schmidt(w);

    std::vector<PiecewisePoly> cs;
    for (int idx : {0, 1, 4, 5}) cs.push_back(project_out(xi(1, idx).restricted(0.0, 1.0), {phi1, phi2}));

    QuadraticSystem sys;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            sys.a(i, j) = inner_product(cs[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
            sys.cc(i, j) = inner_product(cs[static_cast<std::size_t>(i)], cs[static_cast<std::size_t>(j)]);
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        rep.attempts = attempt;
        Eigen::VectorXd s(8);
        for (int i = 0; i < 8; ++i) s(i) = unif(rng);
        Eigen::LevenbergMarquardt<QuadraticSystem> lm(sys);
        lm.setMaxfev(2000);
        lm.setXtol(1e-15);
        lm.setFtol(1e-15);
        lm.minimize(s);
        Eigen::VectorXd f(8);
        sys(s, f);
        rep.lm_residual = f.norm();
        if (!(rep.lm_residual <= 1e-10)) continue;

        std::vector<double> s1(s.data(), s.data() + 4);
        std::vector<double> s2(s.data() + 4, s.data() + 8);
        const auto phi34 = gram_schmidt({linear_combination(s1, v), linear_combination(s2, v)});

        GeneratorSet g;
        g.phi[0] = phi1;
        g.phi[1] = phi2;
        g.phi[2] = detail::with_sign_convention(phi34[0]);
        g.phi[3] = detail::with_sign_convention(phi34[1]);
        std::vector<PiecewisePoly> interior{g.phi[0], g.phi[1], g.phi[2], g.phi[3]};
        for (int j = 0; j < 4; ++j) interior.push_back(g.phi[static_cast<std::size_t>(j)].shifted(-1.0));
        PiecewisePoly g5 = project_out(xi(1, 0), interior);
        g.phi[4] = detail::with_sign_convention(g5.scaled(1.0 / l2_norm(g5)));
        interior.insert(interior.begin() + 4, g.phi[4]);
        interior.push_back(g.phi[4].shifted(-1.0));
        PiecewisePoly g6 = project_out(xi(1, 1), interior);
        g.phi[5] = detail::with_sign_convention(g6.scaled(1.0 / l2_norm(g6)));

        const double p5 = g.phi[4](0.0);
        const double p6 = g.phi[5](0.0);
        PiecewisePoly left = (p6 * g.phi[4] - p5 * g.phi[5]).restricted(0.0, 1.0);
        PiecewisePoly right = (p6 * g.phi[4].shifted(1.0) - p5 * g.phi[5].shifted(1.0)).restricted(0.0, 1.0);
        g.phi_left = detail::with_sign_convention(left.scaled(1.0 / l2_norm(left)));
        g.phi_right = detail::with_sign_convention(right.scaled(1.0 / l2_norm(right)));

        rep.phi34_residual = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 2; j < 4; ++j)
                rep.phi34_residual = std::max(rep.phi34_residual,
                                              std::abs(inner_product(g.phi[i], g.phi[j]) - (i == j ? 1.0 : 0.0)));
        rep.orthonormality_residual = scaling_orthonormality_residual(g);
        rep.span_residual = 0.0;
        for (const PiecewisePoly& f : g.phi) rep.span_residual = std::max(rep.span_residual, hermite_span_distance(f));
        if (rep.orthonormality_residual <= 1e-8 && rep.phi34_residual <= 1e-8) {
            if (report) *report = rep;
            return g;
        }
    }
    if (report) *report = rep;
    throw StageError(Stage::basis, "Levenberg-Marquardt did not reach an orthonormal generator family");
}

}  // namespace orthowave
