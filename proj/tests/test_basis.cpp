#include "oracles.hpp"

#include "orthowave/basis1d.hpp"

#include <gtest/gtest.h>

using namespace orthowave;

class BasisLevels : public ::testing::TestWithParam<int> {};

TEST_P(BasisLevels, VerificationPasses) {
    const int k = GetParam();
    const Basis1D b = build_basis(oracle::generators(), k);
    const BasisReport r = verify_basis(b);
    EXPECT_TRUE(r.pass()) << (r.first_failure() ? r.first_failure()->name : "");
    EXPECT_LE(r.gram_residual, 1e-8);
    EXPECT_LE(r.moment_residual, 1e-10);
    EXPECT_LE(r.boundary_residual, 1e-10);
    EXPECT_LE(r.two_scale_residual, 1e-8);
    EXPECT_GT(r.h1_condition, 1.0);
    EXPECT_LT(r.h1_condition, 100.0);
}

INSTANTIATE_TEST_SUITE_P(UpToFive, BasisLevels, ::testing::Values(0, 1, 2, 3, 4, 5));

TEST(Basis, LevelSizesAndLayout) {
    const Basis1D b = build_basis(oracle::generators(), 3);
    EXPECT_EQ(b.size(), 12u + 12u + 24u + 48u);
    for (int m = 0; m <= 3; ++m) EXPECT_EQ(b.level_size(m), level_block_size(m));
    const auto l0 = b.level(0);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(l0[i].kind, FunctionKind::scaling);
        EXPECT_EQ(l0[i].translation, static_cast<int>(i) - 5);
    }
    EXPECT_EQ(l0[6].kind, FunctionKind::left_boundary);
    EXPECT_EQ(l0[11].kind, FunctionKind::right_boundary);
    const auto l2 = b.level(2);
    EXPECT_EQ(l2.front().kind, FunctionKind::left_boundary);
    EXPECT_EQ(l2.back().kind, FunctionKind::right_boundary);
    for (std::size_t i = 0; i < l2.size(); ++i) EXPECT_EQ(l2[i].translation, static_cast<int>(i) + 1);
}

TEST(Basis, SupportsShrinkWithLevel) {
    const Basis1D b = build_basis(oracle::generators(), 4);
    for (const auto& f : b.functions()) {
        EXPECT_GE(f.shape.support_begin(), -1e-15);
        EXPECT_LE(f.shape.support_end(), 1.0 + 1e-15);
        if (f.level > 0) {
            EXPECT_LE(f.shape.support_end() - f.shape.support_begin(), std::ldexp(2.0, -f.level) + 1e-15);
        }
    }
}

TEST(Basis, ScalingOnlyBasis) {
    const Basis1D b = build_basis(oracle::generators(), 0, true);
    EXPECT_EQ(b.size(), 6u);
    EXPECT_TRUE(b.scaling_only());
    const BasisReport r = verify_basis(b);
    EXPECT_TRUE(r.pass()) << (r.first_failure() ? r.first_failure()->name : "");
}

TEST(Basis, ReportCsvListsEveryCheck) {
    const BasisReport r = verify_basis(build_basis(oracle::generators(), 1));
    const std::string csv = report_csv(r);
    EXPECT_EQ(csv.rfind("check,residual,tolerance,pass\n", 0), 0u);
    for (const Check& c : r.checks) EXPECT_NE(csv.find(c.name + ","), std::string::npos);
}
