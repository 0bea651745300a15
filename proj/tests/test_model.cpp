#include "oracles.hpp"

#include "orthowave/errors.hpp"
#include "orthowave/market.hpp"
#include "orthowave/params_io.hpp"
#include "orthowave/solution_eval.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace orthowave;

namespace {

MarketParams market(int d, double sigma = 0.2, double rho = 0.25) {
    MarketParams m;
    m.d = d;
    m.r = 0.06;
    m.sigma.assign(static_cast<std::size_t>(d), sigma);
    m.rho.assign(static_cast<std::size_t>(d * d), rho);
    for (int i = 0; i < d; ++i) m.rho[static_cast<std::size_t>(i * d + i)] = 1.0;
    m.strike = 10.0;
    m.maturity = 1.0;
    return m;
}

DomainSpec domain(int d) {
    DomainSpec dom;
    dom.s_min.assign(static_cast<std::size_t>(d), 0.1);
    dom.s_max.assign(static_cast<std::size_t>(d), 50.0);
    return dom;
}

}  // namespace

TEST(Model, EffectiveParametersOfTheTableMarket) {
    const EffectiveParams e = effective_vol_and_div(market(2));
    EXPECT_NEAR(e.sigma * e.sigma, 0.025, 1e-15);
    EXPECT_NEAR(e.delta, 0.0075, 1e-15);
}

TEST(Model, NormalCdf) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.96), 0.9750021048517795, 1e-15);
    EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-15);
    EXPECT_GT(normal_cdf(-37.0), 0.0);
    EXPECT_NEAR(normal_cdf(-10.0), 7.619853024160527e-24, 1e-36);
}

TEST(Model, GeometricAverage) {
    const std::vector<double> s{2.0, 8.0};
    EXPECT_NEAR(geometric_average(s), 4.0, 1e-15);
    const std::vector<double> t{1.0, 10.0, 100.0};
    EXPECT_NEAR(geometric_average(t), 10.0, 1e-13);
}

TEST(Model, PayoffOnCubeMatchesPricePayoff) {
    for (int d = 1; d <= 4; ++d) {
        const MarketParams m = market(d);
        const DomainSpec dom = domain(d);
        std::mt19937 rng(static_cast<unsigned>(d));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> z(static_cast<std::size_t>(d));
            for (double& x : z) x = u(rng);
            const std::vector<double> s = cube_to_prices(m, dom, z, 0.0);
            const double g = geometric_average(s);
            EXPECT_NEAR(payoff_on_cube(OptionKind::put, m, dom)(z), std::max(10.0 - g, 0.0), 1e-12);
            EXPECT_NEAR(payoff_on_cube(OptionKind::call, m, dom)(z), std::max(g - 10.0, 0.0), 1e-12);
        }
    }
    const std::vector<double> atm{10.0, 10.0};
    const auto z = prices_to_cube(market(2), domain(2), atm, 0.0);
    EXPECT_NEAR(payoff_on_cube(OptionKind::put, market(2), domain(2))(z), 0.0, 1e-13);
}

TEST(Model, KinkSeparatesActiveAndInactiveRegions) {
    const MarketParams m = market(2);
    const DomainSpec dom = domain(2);
    const ExpLinearPayoff put = payoff_on_cube(OptionKind::put, m, dom);
    const std::vector<double> lo{9.9, 9.9}, hi{10.1, 10.1};
    EXPECT_GT(put(prices_to_cube(m, dom, lo, 0.0)), 0.0);
    EXPECT_EQ(put(prices_to_cube(m, dom, hi, 0.0)), 0.0);
}

TEST(Model, AnalyticPriceMatchesIndependentFormula) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> spot(2.0, 40.0), t(0.05, 2.0);
    for (int d = 1; d <= 5; ++d) {
        const MarketParams m = market(d, 0.3, 0.4);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> s(static_cast<std::size_t>(d));
            for (double& x : s) x = spot(rng);
            const double tt = t(rng);
            for (OptionKind k : {OptionKind::put, OptionKind::call})
                EXPECT_NEAR(analytic_price(k, m, s, tt),
                            oracle::reference_geometric(k == OptionKind::call, m, s, tt), 1e-10);
        }
    }
}

TEST(Model, PutCallParity) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> spot(1.0, 40.0), t(0.01, 3.0), vol(0.05, 0.6);
    for (int trial = 0; trial < 1000; ++trial) {
        MarketParams m = market(3, vol(rng), 0.1);
        m.sigma[1] = vol(rng);
        std::vector<double> s{spot(rng), spot(rng), spot(rng)};
        const double tt = t(rng);
        const EffectiveParams e = effective_vol_and_div(m);
        const double forward = geometric_average(s) * std::exp(-e.delta * tt) - m.strike * std::exp(-m.r * tt);
        EXPECT_NEAR(analytic_price(OptionKind::call, m, s, tt) - analytic_price(OptionKind::put, m, s, tt), forward,
                    1e-12 * std::max(1.0, std::abs(forward) + m.strike));
    }
}

TEST(Model, SingleAssetReducesToBlackScholes) {
    const MarketParams m = market(1);
    for (double s0 : {5.0, 10.0, 15.0}) {
        const std::vector<double> s{s0};
        EXPECT_NEAR(analytic_price(OptionKind::call, m, s, 1.0), oracle::bs_call(s0, 10.0, 0.06, 0.0, 0.2, 1.0),
                    1e-10);
    }
}

TEST(Model, PutIsMonotoneInSpotAndTime) {
    const MarketParams m = market(2);
    double prev = 1e9;
    for (double s0 = 2.0; s0 < 30.0; s0 += 1.0) {
        const std::vector<double> s{s0, s0};
        const double p = analytic_price(OptionKind::put, m, s, 1.0);
        EXPECT_LT(p, prev);
        prev = p;
        // Far out of the money the call is below the resolution of the parity relation.
        if (s0 >= 5.0) {
            EXPECT_LT(analytic_price(OptionKind::call, m, s, 1.0), analytic_price(OptionKind::call, m, s, 1.5));
        }
    }
}

TEST(Model, CubeMapRoundTrip) {
    const MarketParams m = market(3);
    const DomainSpec dom = domain(3);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> z{u(rng), u(rng), u(rng)};
        const double t = u(rng);
        const auto back = prices_to_cube(m, dom, cube_to_prices(m, dom, z, t), t);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(back[i], z[i], 1e-13);
    }
    const std::vector<double> lo{0.1, 0.1, 0.1};
    const auto z0 = prices_to_cube(m, dom, lo, 0.0);
    for (double x : z0) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(Model, DriftAndDiffusionTable) {
    const MarketParams m = market(2);
    const DomainSpec dom = domain(2);
    const auto b = drift(m);
    EXPECT_NEAR(b[0], 0.02 - 0.06, 1e-15);
    const double w = std::log(500.0);
    const auto p = diffusion_table(m, dom);
    EXPECT_NEAR(p[0], 0.04 / (2 * w * w), 1e-15);
    EXPECT_NEAR(p[1], 0.25 * 0.04 / (2 * w * w), 1e-15);
    EXPECT_DOUBLE_EQ(p[1], p[2]);
}

TEST(Model, InvalidMarketIsRejected) {
    MarketParams m = market(2);
    m.rho = {1.0, 1.2, 1.2, 1.0};
    EXPECT_THROW(m.validate(), StageError);
    m = market(2);
    m.sigma[0] = -0.1;
    EXPECT_THROW(m.validate(), StageError);
    DomainSpec dom = domain(2);
    dom.s_min[1] = 60.0;
    EXPECT_THROW(dom.validate(2), StageError);
}

TEST(Params, ScalarAndListFormsAgree) {
    const ProblemSpec a = parse_problem(
        R"({"d":2,"r":0.06,"sigma":0.2,"rho":0.25,"K":10,"T":1,"S_min":0.1,"S_max":50,"option":"put"})");
    const ProblemSpec b = parse_problem(
        R"({"d":2,"r":0.06,"sigma":[0.2,0.2],"rho":[[1,0.25],[0.25,1]],"K":10,"T":1,)"
        R"("S_min":[0.1,0.1],"S_max":[50,50],"option":"put"})");
    EXPECT_EQ(a.market.sigma, b.market.sigma);
    EXPECT_EQ(a.market.rho, b.market.rho);
    EXPECT_EQ(a.domain.s_min, b.domain.s_min);
    EXPECT_EQ(a.domain.s_max, b.domain.s_max);
    EXPECT_EQ(a.option, OptionKind::put);
}

TEST(Params, DimensionOverride) {
    const ProblemSpec p = load_problem(std::filesystem::path(ORTHOWAVE_TEST_CONFIG_DIR) / "table1.json", 4);
    EXPECT_EQ(p.market.d, 4);
    EXPECT_EQ(p.market.rho.size(), 16u);
    EXPECT_DOUBLE_EQ(p.market.correlation(1, 3), 0.25);
    EXPECT_DOUBLE_EQ(p.market.correlation(2, 2), 1.0);
    EXPECT_THROW(parse_problem(R"({"d":2,"r":0.06,"sigma":[0.2,0.2],"rho":0.25,"K":10,"T":1,)"
                               R"("S_min":0.1,"S_max":50,"option":"put"})",
                               3),
                 StageError);
}

TEST(Params, MalformedInputIsAParseError) {
    const std::string base = R"("r":0.06,"sigma":0.2,"rho":0.25,"K":10,"T":1,"S_min":0.1,"S_max":50)";
    for (const std::string& text : {std::string("{") + base + R"(,"option":"put"})",
                                    std::string(R"({"d":2,)") + base + R"(,"option":"straddle"})",
                                    std::string(R"({"d":2,)") + base + "}", std::string("not json")}) {
        try {
            parse_problem(text);
            FAIL() << text;
        } catch (const StageError& e) {
            EXPECT_EQ(e.stage(), Stage::parse);
        }
    }
    EXPECT_THROW(load_problem("/nonexistent/params.json"), StageError);
}

TEST(Evaluate, PointsOutsideTheCubeAreRejected) {
    const Basis1D b = build_basis(oracle::generators(), 0, true);
    const SparseIndexSet set = enumerate_table(2, 0);
    const std::vector<double> c(set.total_count(), 0.0);
    const std::vector<double> far{100.0, 10.0};
    try {
        evaluate_solution_at_prices(c, set, b, market(2), domain(2), far, 1.0);
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), Stage::evaluate);
    }
}
