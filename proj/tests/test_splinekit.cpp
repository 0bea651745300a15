#include "orthowave/generators.hpp"
#include "orthowave/piecewise_poly.hpp"
#include "orthowave/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace orthowave;

namespace {

PiecewisePoly random_poly(std::mt19937& rng, std::vector<double> breaks) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<PiecewisePoly::Coeffs> c(breaks.size() - 1);
    for (auto& p : c)
        for (double& x : p) x = u(rng);
    return PiecewisePoly(breaks, c);
}

// Random C1 spline on [0, 1] vanishing at both ends, from interior Hermite cubics.
PiecewisePoly random_hermite(std::mt19937& rng, int level) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<PiecewisePoly> fs;
    std::vector<double> w;
    for (int m = 1; m < (1 << level); ++m) {
        fs.push_back(hermite_xi1().dilated(level, m));
        fs.push_back(hermite_xi2().dilated(level, m));
        w.push_back(u(rng));
        w.push_back(u(rng));
    }
    return linear_combination(w, fs);
}

}  // namespace

TEST(Quadrature, GaussLegendreIsExactForDegree2nMinus1) {
    for (int n : {1, 2, 4, 7, 16}) {
        const QuadratureRule r = gauss_legendre(n);
        ASSERT_EQ(r.size(), n);
        for (int m = 0; m <= 2 * n - 1; ++m) {
            double s = 0.0;
            for (int q = 0; q < n; ++q) s += r.weights[q] * std::pow(r.nodes[q], m);
            const double exact = m % 2 == 1 ? 0.0 : 2.0 / (m + 1);
            EXPECT_NEAR(s, exact, 1e-14) << "n=" << n << " m=" << m;
        }
    }
}

TEST(Quadrature, NodesAreSortedAndSymmetric) {
    const QuadratureRule r = gauss_legendre(9);
    for (int q = 0; q + 1 < r.size(); ++q) EXPECT_LT(r.nodes[q], r.nodes[q + 1]);
    for (int q = 0; q < r.size(); ++q) EXPECT_NEAR(r.nodes[q], -r.nodes[r.size() - 1 - q], 1e-15);
}

TEST(PiecewisePoly, HermiteInnerProducts) {
    const PiecewisePoly a = hermite_xi1();
    const PiecewisePoly b = hermite_xi2();
    EXPECT_NEAR(inner_product(a, a), 26.0 / 35.0, 1e-15);
    EXPECT_NEAR(inner_product(b, b), 2.0 / 105.0, 1e-15);
    EXPECT_NEAR(inner_product(a, b), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(a(0.0), 1.0);
    EXPECT_DOUBLE_EQ(derivative(b)(0.0), 1.0);
}

TEST(PiecewisePoly, GlobalAndLocalFormsAgree) {
    const std::vector<PiecewisePoly::Coeffs> global{{1.0, -2.0, 0.5, 3.0}, {-4.0, 1.0, 2.0, -1.0}};
    const PiecewisePoly p = PiecewisePoly::from_global({0.25, 0.5, 1.0}, global);
    for (double x : {0.25, 0.3, 0.49, 0.5, 0.7, 1.0}) {
        const auto& c = global[x < 0.5 ? 0 : 1];
        EXPECT_NEAR(p(x), ((c[0] * x + c[1]) * x + c[2]) * x + c[3], 1e-14);
    }
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t e = 0; e < 4; ++e) EXPECT_NEAR(p.global(i)[e], global[i][e], 1e-13);
}

TEST(PiecewisePoly, EvaluationConventions) {
    const PiecewisePoly p({0.0, 1.0, 2.0}, {{1.0, 0.0, 0.0, 0.0}, {5.0, 0.0, 0.0, 0.0}});
    EXPECT_EQ(p(-0.1), 0.0);
    EXPECT_EQ(p(2.1), 0.0);
    EXPECT_EQ(p(1.0), 5.0);  // right-continuous
    EXPECT_EQ(p(2.0), 5.0);  // last piece at the right end
    EXPECT_THROW(PiecewisePoly({0.0, 0.0}, {{1.0, 0.0, 0.0, 0.0}}), std::invalid_argument);
}

TEST(PiecewisePoly, IntegrationByPartsForFunctionsVanishingAtTheEnds) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const PiecewisePoly p = random_hermite(rng, 2);
        const PiecewisePoly q = random_hermite(rng, 3);
        ASSERT_NEAR(p(0.0), 0.0, 1e-13);
        ASSERT_NEAR(q(1.0), 0.0, 1e-13);
        EXPECT_NEAR(inner_product(derivative(p), q), -inner_product(p, derivative(q)), 1e-13);
    }
}

TEST(PiecewisePoly, RescalePreservesNormUpToLevel10) {
    std::mt19937 rng(11);
    const PiecewisePoly p = random_poly(rng, {-1.0, -0.5, 0.0, 0.25, 1.0});
    const double n0 = l2_norm(p);
    for (int j = 0; j <= 10; ++j) {
        const PiecewisePoly r = rescale(p, j, 3);
        EXPECT_NEAR(l2_norm(r), n0, 1e-12 * n0) << "j=" << j;
        const double x = 0.3;
        const double scale = std::sqrt(std::ldexp(1.0, j));
        EXPECT_NEAR(r((x + 3.0) / std::ldexp(1.0, j)), scale * p(x), 1e-12 * scale);
    }
}

TEST(PiecewisePoly, ShiftDerivativeAndMoments) {
    const PiecewisePoly one({0.0, 1.0}, {{1.0, 0.0, 0.0, 0.0}});
    for (int m = 0; m <= 3; ++m) EXPECT_NEAR(moment(one, m), 1.0 / (m + 1), 1e-15);
    const PiecewisePoly s = one.shifted(2.0);
    EXPECT_DOUBLE_EQ(s.support_begin(), 2.0);
    EXPECT_NEAR(moment(s, 1), 2.5, 1e-14);
    const PiecewisePoly cube({0.0, 2.0}, {{0.0, 0.0, 0.0, 1.0}});
    EXPECT_NEAR(derivative(cube)(1.5), 3.0 * 1.5 * 1.5, 1e-13);
}

TEST(PiecewisePoly, LinearCombinationMergesBreakpoints) {
    const PiecewisePoly a({0.0, 0.5}, {{1.0, 0.0, 0.0, 0.0}});
    const PiecewisePoly b({0.25, 1.0}, {{0.0, 2.0, 0.0, 0.0}});
    const PiecewisePoly c = a + 3.0 * b;
    for (double x : {0.1, 0.3, 0.6, 0.9}) EXPECT_NEAR(c(x), a(x) + 3.0 * b(x), 1e-14);
    EXPECT_NEAR(max_abs_difference(c - a, 3.0 * b), 0.0, 1e-14);
}

TEST(PiecewisePoly, TrimDropsNegligibleEndPieces) {
    const PiecewisePoly p({-1.0, 0.0, 1.0, 2.0}, {{1e-17, 0.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}});
    const PiecewisePoly t = p.trimmed(1e-12);
    EXPECT_DOUBLE_EQ(t.support_begin(), 0.0);
    EXPECT_DOUBLE_EQ(t.support_end(), 1.0);
}
