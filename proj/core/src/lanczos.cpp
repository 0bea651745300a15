#include "orthowave/lanczos.hpp"

#include "orthowave/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

namespace orthowave {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Orthogonalizes v against the basis twice and normalizes; returns the norm before scaling.
double orthonormalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
            const double c = dot(v, q);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
        }
    }
    const double nrm = std::sqrt(dot(v, v));
    if (nrm > 0.0)
        for (double& x : v) x /= nrm;
    return nrm;
}

}  // namespace

ConditionEstimate lanczos_extremes(const LinearOperator& a, std::size_t n, int steps, std::uint64_t seed) {
    if (n == 0) throw StageError(Stage::solve, "lanczos: empty operator");
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(std::max(steps, 1)), n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto random_vector = [&] {
        std::vector<double> v(n);
        for (double& x : v) x = normal(rng);
        return v;
    };

    std::vector<std::vector<double>> basis;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> v = random_vector();
    orthonormalize(v, basis);
    std::vector<double> w(n);
    double scale = 0.0;
    while (basis.size() < m) {
        basis.push_back(v);
        a(basis.back(), w);
        const double al = dot(w, basis.back());
        if (!std::isfinite(al)) throw StageError(Stage::solve, "lanczos: non-finite operator output");
        alpha.push_back(al);
        scale = std::max(scale, std::abs(al));
        if (basis.size() == m) break;
        double b = orthonormalize(w, basis);
        int retries = 0;
        while (b <= 1e-12 * scale) {
            if (++retries > 10) throw StageError(Stage::solve, "lanczos: repeated breakdown");
            w = random_vector();
            if (orthonormalize(w, basis) <= 1e-12) continue;
            b = 0.0;
            break;
        }
        beta.push_back(b);
        v = w;
    }

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag(k);
    Eigen::VectorXd off(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index j = 0; j < k; ++j) {
        diag(j) = alpha[static_cast<std::size_t>(j)];
        if (j + 1 < k) off(j) = beta[static_cast<std::size_t>(j)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    ConditionEstimate est;
    est.lambda_min = es.eigenvalues().minCoeff();
    est.lambda_max = es.eigenvalues().maxCoeff();
    est.condition = est.lambda_max / est.lambda_min;
    est.steps = static_cast<int>(k);
    return est;
}

ConditionEstimate estimate_condition(const LinearOperator& a, std::size_t n, int steps, std::uint64_t seed) {
    ConditionEstimate est = lanczos_extremes(a, n, steps, seed);
    if (!(est.lambda_min > 0.0))
        throw StageError(Stage::solve, "estimate_condition: operator is not positive definite");
    return est;
}

}  // namespace orthowave
