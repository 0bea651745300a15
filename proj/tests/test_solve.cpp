#include "oracles.hpp"

#include "orthowave/block_operator.hpp"
#include "orthowave/cg.hpp"
#include "orthowave/errors.hpp"
#include "orthowave/lanczos.hpp"
#include "orthowave/market.hpp"
#include "orthowave/payoff_projection.hpp"
#include "orthowave/solution_eval.hpp"
#include "orthowave/time_march.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cstdio>

using namespace orthowave;

namespace {

LinearOperator dense_op(const Eigen::MatrixXd& a) {
    return [a](std::span<const double> x, std::span<double> y) {
        const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
        yv = a * xv;
    };
}

Eigen::MatrixXd random_spd(int n, unsigned seed) {
    std::srand(seed);
    const Eigen::MatrixXd m = Eigen::MatrixXd::Random(n, n);
    return m * m.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

struct Problem {
    MarketParams market;
    DomainSpec domain;
};

Problem table_problem(int d) {
    Problem p;
    p.market.d = d;
    p.market.r = 0.06;
    p.market.sigma.assign(static_cast<std::size_t>(d), 0.2);
    p.market.rho.assign(static_cast<std::size_t>(d * d), 0.25);
    for (int i = 0; i < d; ++i) p.market.rho[static_cast<std::size_t>(i * d + i)] = 1.0;
    p.market.strike = 10.0;
    p.market.maturity = 1.0;
    p.domain.s_min.assign(static_cast<std::size_t>(d), 0.1);
    p.domain.s_max.assign(static_cast<std::size_t>(d), 50.0);
    return p;
}

struct PriceRun {
    double value;
    MarchResult march;
};

// Table-convention level kt >= 1 priced at S = (f K, ..., f K).
PriceRun price(int d, int kt, int steps, OptionKind kind, double f, double tol = 1e-10) {
    const Problem pr = table_problem(d);
    const Basis1D b = build_basis(oracle::generators(), kt - 1);
    const SparseIndexSet set = enumerate_table(d, kt);
    const LevelBlocks lb = assemble_level_blocks(b, set.level());
    const auto c0 = project_payoff(payoff_on_cube(kind, pr.market, pr.domain), set, b);
    MarchConfig cfg;
    cfg.steps = steps;
    cfg.maturity = 1.0;
    cfg.cg.tolerance = tol;
    PriceRun run{0.0, march(set, lb, diffusion_table(pr.market, pr.domain), pr.market.r, c0, cfg)};
    const std::vector<double> s(static_cast<std::size_t>(d), f * 10.0);
    run.value = evaluate_solution_at_prices(run.march.coefficients, set, b, pr.market, pr.domain, s, 1.0);
    return run;
}

}  // namespace

TEST(Cg, IdentityConvergesInOneIteration) {
    const auto v = oracle::random_vector(30, 1);
    std::vector<double> x(30);
    const CgReport r = cg_solve(dense_op(Eigen::MatrixXd::Identity(30, 30)), v, x);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_LE(oracle::max_abs_diff(x, v), 1e-15);
}

TEST(Cg, RandomSpdMatchesDirectSolve) {
    const Eigen::MatrixXd a = random_spd(50, 3);
    const auto b = oracle::random_vector(50, 4);
    std::vector<double> x(50);
    const CgReport r = cg_solve(dense_op(a), b, x);
    ASSERT_TRUE(r.converged);
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), 50);
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), 50);
    EXPECT_LE((a * xv - bv).norm() / bv.norm(), 1e-10);
    const Eigen::VectorXd direct = a.llt().solve(bv);
    EXPECT_LE((xv - direct).norm() / direct.norm(), 1e-9);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
    EXPECT_GE(r.ritz_min, ev.minCoeff() * (1 - 1e-10));
    EXPECT_LE(r.ritz_max, ev.maxCoeff() * (1 + 1e-10));
    EXPECT_NEAR(r.ritz_max, ev.maxCoeff(), 1e-6 * ev.maxCoeff());
}

TEST(Cg, IterationLimitKeepsLastIterate) {
    const Eigen::MatrixXd a = random_spd(40, 5);
    const auto b = oracle::random_vector(40, 6);
    std::vector<double> x(40);
    CgOptions opt;
    opt.max_iterations = 2;
    const CgReport r = cg_solve(dense_op(a), b, x, opt);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 2);
    EXPECT_GT(oracle::max_abs(x), 0.0);
}

TEST(Cg, NonFiniteValuesAbort) {
    const auto nan_op = [](std::span<const double>, std::span<double> y) {
        std::fill(y.begin(), y.end(), std::numeric_limits<double>::quiet_NaN());
    };
    std::vector<double> x(4);
    const std::vector<double> b{1, 2, 3, 4};
    EXPECT_THROW(cg_solve(nan_op, b, x), StageError);
}

TEST(Cg, WarmStartFromTheSolutionNeedsNoIterations) {
    const Eigen::MatrixXd a = random_spd(20, 8);
    const auto b = oracle::random_vector(20, 9);
    std::vector<double> x(20);
    cg_solve(dense_op(a), b, x, {1e-13, 1000, false});
    const CgReport r = cg_solve(dense_op(a), b, x, {1e-10, 1000, true});
    EXPECT_EQ(r.iterations, 0);
}

TEST(Lanczos, KnownSpectra) {
    EXPECT_NEAR(estimate_condition(dense_op(Eigen::MatrixXd::Identity(40, 40)), 40).condition, 1.0, 1e-12);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(10, 10);
    for (int i = 0; i < 10; ++i) d(i, i) = i + 1;
    const ConditionEstimate e = estimate_condition(dense_op(d), 10);
    EXPECT_NEAR(e.condition, 10.0, 1.0);
    EXPECT_EQ(e.steps, 10);
    Eigen::MatrixXd big = Eigen::MatrixXd::Zero(300, 300);
    for (int i = 0; i < 300; ++i) big(i, i) = 1.0 + 99.0 * i / 299.0;
    EXPECT_NEAR(estimate_condition(dense_op(big), 300, 60).condition, 100.0, 10.0);
}

TEST(Lanczos, IndefiniteOperatorIsRejected) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(5, 5);
    a(2, 2) = -1.0;
    EXPECT_THROW(estimate_condition(dense_op(a), 5), StageError);
    EXPECT_NEAR(lanczos_extremes(dense_op(a), 5).lambda_min, -1.0, 1e-12);
}

TEST(March, ZeroDiffusionAndRateIsIdentity) {
    const Basis1D b = build_basis(oracle::generators(), 2);
    const SparseIndexSet set = enumerate(2, 2);
    const LevelBlocks lb = assemble_level_blocks(b, 2);
    const auto c0 = oracle::random_vector(set.total_count(), 2);
    MarchConfig cfg;
    cfg.steps = 8;
    const MarchResult r = march(set, lb, std::vector<double>(4, 0.0), 0.0, c0, cfg);
    EXPECT_LE(oracle::max_abs_diff(r.coefficients, c0), 1e-12);
    EXPECT_EQ(r.log.size(), 4u + 6u);
    EXPECT_NEAR(r.log.back().time, 1.0, 1e-14);
}

TEST(March, ImplicitEulerStepsDoNotIncreaseTheNorm) {
    const Problem pr = table_problem(2);
    const Basis1D b = build_basis(oracle::generators(), 3);
    const SparseIndexSet set = enumerate(2, 3);
    const LevelBlocks lb = assemble_level_blocks(b, 3);
    const BlockOperator e = make_euler_system(set, lb, diffusion_table(pr.market, pr.domain), 0.06, 1.0 / 16);
    std::vector<double> c = project_payoff(payoff_on_cube(OptionKind::put, pr.market, pr.domain), set, b);
    std::vector<double> rhs(c.size());
    for (int l = 0; l < 6; ++l) {
        const double before = std::sqrt(oracle::dot(c, c));
        for (std::size_t i = 0; i < c.size(); ++i) rhs[i] = 32.0 * c[i];
        ASSERT_TRUE(cg_solve([&](std::span<const double> x, std::span<double> y) { e.apply(x, y); }, rhs, c,
                             {1e-13, 1000, false})
                        .converged);
        EXPECT_LE(std::sqrt(oracle::dot(c, c)), before * (1 + 1e-10));
    }
}

TEST(March, CgFailureNamesTheStep) {
    const Basis1D b = build_basis(oracle::generators(), 1);
    const SparseIndexSet set = enumerate(2, 1);
    const LevelBlocks lb = assemble_level_blocks(b, 1);
    MarchConfig cfg;
    cfg.steps = 4;
    cfg.cg.max_iterations = 1;
    const std::vector<double> p{1e-3, 2e-4, 2e-4, 1e-3};
    try {
        march(set, lb, p, 0.06, oracle::random_vector(set.total_count(), 1), cfg);
        FAIL() << "expected a solve error";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), Stage::solve);
        EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos);
    }
}

TEST(March, SingleStepUsesTwoHalfSteps) {
    const Basis1D b = build_basis(oracle::generators(), 0, true);
    const SparseIndexSet set = enumerate_table(2, 0);
    const LevelBlocks lb = assemble_level_blocks(b, 0);
    MarchConfig cfg;
    cfg.steps = 1;
    const MarchResult r = march(set, lb, {1e-3, 0, 0, 1e-3}, 0.06, oracle::random_vector(36, 3), cfg);
    ASSERT_EQ(r.log.size(), 2u);
    EXPECT_EQ(r.log[1].scheme, "euler");
    EXPECT_NEAR(r.log[1].time, 1.0, 1e-15);
}

TEST(March, OneAssetMatchesScalarBlackScholes) {
    const PriceRun run = price(1, 5, 1024, OptionKind::put, 0.5);
    EXPECT_NEAR(run.value, oracle::bs_put(5.0, 10.0, 0.06, 0.0, 0.2, 1.0), 1e-4);
    const PriceRun atm = price(1, 5, 1024, OptionKind::call, 1.0);
    EXPECT_NEAR(atm.value, oracle::bs_call(10.0, 10.0, 0.06, 0.0, 0.2, 1.0), 1e-3);
}

TEST(March, TighterCgToleranceDoesNotMoveTheReportedErrors) {
    const MarketParams m = table_problem(2).market;
    for (double f : {0.5, 1.0}) {
        const std::vector<double> s{10.0 * f, 10.0 * f};
        const double exact = analytic_price(OptionKind::put, m, s, 1.0);
        const PriceRun a = price(2, 4, 256, OptionKind::put, f, 1e-10);
        const PriceRun b = price(2, 4, 256, OptionKind::put, f, 1e-12);
        char ea[32], eb[32];
        std::snprintf(ea, sizeof ea, "%.2e", std::abs(a.value - exact));
        std::snprintf(eb, sizeof eb, "%.2e", std::abs(b.value - exact));
        EXPECT_STREQ(ea, eb);
        EXPECT_LE(std::abs(a.value - b.value), 1e-3 * std::abs(b.value - exact));
    }
}

TEST(March, TimeErrorIsSubdominant) {
    const Problem pr = table_problem(2);
    const std::vector<double> s{10.0, 10.0};
    const double exact = analytic_price(OptionKind::put, pr.market, s, 1.0);
    const PriceRun m = price(2, 3, 64, OptionKind::put, 1.0);
    const PriceRun m2 = price(2, 3, 128, OptionKind::put, 1.0);
    EXPECT_LT(std::abs(m.value - m2.value), std::abs(m.value - exact));
}

TEST(March, IterationCountsStaySmall) {
    int prev = 100;
    for (int kt = 1; kt <= 4; ++kt) {
        const PriceRun run = price(2, kt, 1 << (2 * kt), OptionKind::put, 1.0);
        EXPECT_LE(run.march.max_iterations, 12);
        EXPECT_LE(run.march.max_iterations, prev + 1) << "k=" << kt;
        prev = run.march.max_iterations;
    }
}
