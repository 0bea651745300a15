#include "orthowave/cg.hpp"

#include "orthowave/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace orthowave {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void ritz_values(const std::vector<double>& alphas, const std::vector<double>& betas, CgReport& rep) {
    const auto n = static_cast<Eigen::Index>(alphas.size());
    if (n == 0) return;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        diag(j) = 1.0 / alphas[ju] + (j > 0 ? betas[ju - 1] / alphas[ju - 1] : 0.0);
        if (j + 1 < n) off(j) = std::sqrt(betas[ju]) / alphas[ju];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    rep.ritz_min = es.eigenvalues().minCoeff();
    rep.ritz_max = es.eigenvalues().maxCoeff();
}

}  // namespace

CgReport cg_solve(const LinearOperator& a, std::span<const double> rhs, std::span<double> x, const CgOptions& opt) {
    if (rhs.size() != x.size()) throw StageError(Stage::solve, "cg_solve: dimension mismatch");
    if (!(opt.tolerance > 0.0)) throw StageError(Stage::solve, "cg_solve: tolerance must be positive");
    const std::size_t n = rhs.size();
    CgReport rep;
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (!std::isfinite(bnorm)) throw StageError(Stage::solve, "cg_solve: non-finite right-hand side");
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        rep.converged = true;
        return rep;
    }

    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<double> q(n);
    if (opt.warm_start) {
        a(x, q);
        for (std::size_t i = 0; i < n; ++i) r[i] -= q[i];
    } else {
        std::fill(x.begin(), x.end(), 0.0);
    }
    std::vector<double> p = r;
    double rr = dot(r, r);
    rep.relative_residual = std::sqrt(rr) / bnorm;
    std::vector<double> alphas;
    std::vector<double> betas;

    while (rep.relative_residual > opt.tolerance && rep.iterations < opt.max_iterations) {
        a(p, q);
        const double pq = dot(p, q);
        if (!std::isfinite(pq)) throw StageError(Stage::solve, "cg_solve: non-finite operator output");
        if (pq <= 0.0) throw StageError(Stage::solve, "cg_solve: operator is not positive definite");
        const double alpha = rr / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        alphas.push_back(alpha);
        betas.push_back(beta);
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_new;
        ++rep.iterations;
        rep.relative_residual = std::sqrt(rr) / bnorm;
        if (!std::isfinite(rep.relative_residual)) throw StageError(Stage::solve, "cg_solve: non-finite residual");
    }
    rep.converged = rep.relative_residual <= opt.tolerance;
    ritz_values(alphas, betas, rep);
    return rep;
}

}  // namespace orthowave
