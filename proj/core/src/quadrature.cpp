#include "orthowave/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace orthowave {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    // Golub-Welsch: eigenvalues of the Jacobi matrix of the Legendre recurrence.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        rule.weights[i] = 2.0 * v * v;
    }
    // Polish nodes with Newton steps on P_n and recompute weights from P_n'.
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes[i];
        double dp = 1.0;
        for (int it = 0; it < 3; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            x -= p1 / dp;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const QuadratureRule& gauss4() {
    static const QuadratureRule rule = gauss_legendre(4);
    return rule;
}

}  // namespace orthowave
