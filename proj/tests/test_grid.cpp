#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support.hpp"

using namespace pklap;
using pklap::test::random_grid;

namespace {

GridFunction full(std::vector<double> v) { return GridFunction::from_full(v); }

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(GridFunction, InteriorConstructionPadsBoundaryZeros) {
    const std::vector<double> in{1.0, 2.0, 3.0};
    const auto y = GridFunction::from_interior(in);
    EXPECT_EQ(y.T(), 3);
    EXPECT_EQ(vec(y.values()), (std::vector<double>{0, 1, 2, 3, 0}));
    EXPECT_EQ(y(0), 0.0);
    EXPECT_EQ(y(4), 0.0);
}

TEST(GridFunction, FullConstructionRejectsNonzeroBoundary) {
    EXPECT_THROW(full({1, 2, 3, 0}), std::invalid_argument);
    EXPECT_THROW(full({0, 2, 3, 1e-300}), std::invalid_argument);
    EXPECT_NO_THROW(full({0, 2, 3, 0}));
}

TEST(GridFunction, RejectsTooShort) {
    EXPECT_THROW(GridFunction::zeros(1), std::invalid_argument);
    EXPECT_THROW(full({0, 1, 0}), std::invalid_argument);
    EXPECT_THROW(GridFunction::from_interior(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(GridFunction, IndexOutOfRangeThrows) {
    const auto y = GridFunction::zeros(2);
    EXPECT_THROW(y(4), std::out_of_range);
    EXPECT_THROW(y(-1), std::out_of_range);
}

TEST(ExponentMap, RejectsExponentBelowTwo) {
    try {
        ExponentMap({2, 2, 1.5, 2});
        FAIL() << "accepted p = 1.5";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("exponent below 2"), std::string::npos);
    }
    EXPECT_THROW(ExponentMap({2, 2, NAN, 2}), std::invalid_argument);
}

TEST(ExponentMap, ExtremesAndPeriodic) {
    const std::vector<double> pat{2.0, 3.5};
    const auto p = ExponentMap::periodic(3, pat);
    EXPECT_EQ(vec(p.values()), (std::vector<double>{2, 3.5, 2, 3.5, 2}));
    EXPECT_EQ(p.p_minus(), 2.0);
    EXPECT_EQ(p.p_plus(), 3.5);
    EXPECT_EQ(p.T(), 3);
}

TEST(ForwardDifference, Examples) {
    EXPECT_EQ(forward_difference(full({0, 0, 0, 0})), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(forward_difference(full({0, 1, 2, 0})), (std::vector<double>{1, 1, -2}));
    EXPECT_EQ(forward_difference(full({0, 1, 1, 1, 0})), (std::vector<double>{1, 0, 0, -1}));
}

TEST(SignSplit, Examples) {
    const auto y = full({0, -3, 5, 0});
    EXPECT_EQ(positive_part(y), full({0, 0, 5, 0}));
    EXPECT_EQ(negative_part(y), full({0, 3, 0, 0}));
    EXPECT_EQ(positive_part(GridFunction::zeros(2)), GridFunction::zeros(2));
    EXPECT_EQ(negative_part(GridFunction::zeros(2)), GridFunction::zeros(2));
    const auto z = full({0, 2, 1, 0});
    EXPECT_EQ(positive_part(z), z);
    EXPECT_EQ(negative_part(z), GridFunction::zeros(2));
}

TEST(Norms, Examples) {
    EXPECT_DOUBLE_EQ(h_norm(full({0, 1, 1, 0})), std::sqrt(2.0));
    EXPECT_EQ(h_norm(GridFunction::zeros(5)), 0.0);
    EXPECT_DOUBLE_EQ(h_norm(full({0, 3, 0, 0})), std::sqrt(18.0));
    EXPECT_EQ(sup_norm(full({0, -3, 5, 0})), 5.0);
    EXPECT_EQ(sup_norm(GridFunction::zeros(3)), 0.0);
    EXPECT_EQ(sup_norm(full({0, 1, 1, 0})), 1.0);
}

TEST(ConstantProfile, Examples) {
    EXPECT_EQ(constant_profile(2, 1.0), full({0, 1, 1, 0}));
    EXPECT_EQ(constant_profile(3, 0.0), GridFunction::zeros(3));
    EXPECT_EQ(constant_profile(2, 2.5), full({0, 2.5, 2.5, 0}));
}

TEST(GridProperties, DecompositionAndSignInequalities) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const int T = pklap::test::uniform_int(rng, 2, 30);
        // Mix in exact zeros so the kink cases are exercised.
        std::vector<double> v(static_cast<std::size_t>(T));
        for (auto& x : v) x = pklap::test::uniform_int(rng, 0, 4) == 0 ? 0.0 : pklap::test::uniform(rng, -10, 10);
        const auto y = GridFunction::from_interior(v);
        const auto yp = positive_part(y);
        const auto ym = negative_part(y);
        const auto d = forward_difference(y);
        const auto dp = forward_difference(yp);
        const auto dm = forward_difference(ym);
        for (int k = 0; k <= T + 1; ++k) {
            ASSERT_EQ(y(k), yp(k) - ym(k));
            ASSERT_EQ(yp(k) * ym(k), 0.0);
        }
        for (std::size_t j = 0; j < d.size(); ++j) {
            ASSERT_LE(d[j] * dm[j], 0.0);
            ASSERT_LE(dp[j] * dm[j], 0.0);
        }
    }
}

TEST(GridProperties, ConstantProfileNorm) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int T = pklap::test::uniform_int(rng, 2, 100);
        const double lambda = pklap::test::uniform(rng, -50, 50);
        EXPECT_NEAR(h_norm(constant_profile(T, lambda)), std::abs(lambda) * std::sqrt(2.0),
                    1e-14 * std::abs(lambda));
    }
}

TEST(GridProperties, SupNormBoundOnBall) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 1000; ++trial) {
        const int T = pklap::test::uniform_int(rng, 2, 60);
        auto y = random_grid(rng, T);
        const double r = 1.0 / std::sqrt(T + 1.0);
        y = pklap::test::scaled(y, r * pklap::test::uniform(rng, 0.0, 1.0) / h_norm(y));
        ASSERT_LE(h_norm(y), r);
        ASSERT_LE(sup_norm(y), 1.0);
    }
}

TEST(Tridiagonal, SolveMatchesMultiply) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = pklap::test::uniform_int(rng, 1, 40);
        Tridiagonal A(static_cast<std::size_t>(n));
        // Diagonally dominant so the comparison is well conditioned.
        for (auto& x : A.diag) x = (pklap::test::uniform_int(rng, 0, 1) ? 1.0 : -1.0) * pklap::test::uniform(rng, 6.5, 8);
        for (auto& x : A.sub) x = pklap::test::uniform(rng, -3, 3);
        for (auto& x : A.super) x = pklap::test::uniform(rng, -3, 3);
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = pklap::test::uniform(rng, -1, 1);
        const auto b = A.multiply(x);
        const auto sol = solve_tridiagonal(A, b);
        ASSERT_TRUE(sol.has_value());
        for (int i = 0; i < n; ++i) EXPECT_NEAR((*sol)[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)], 1e-8);
    }
}

TEST(Tridiagonal, PivotsPastZeroDiagonal) {
    Tridiagonal A(3);
    A.diag = {0.0, 0.0, 1.0};
    A.sub = {1.0, 1.0};
    A.super = {2.0, 1.0};
    const std::vector<double> x{1.0, -2.0, 3.0};
    const auto sol = solve_tridiagonal(A, A.multiply(x));
    ASSERT_TRUE(sol.has_value());
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR((*sol)[i], x[i], 1e-14);
}

TEST(Tridiagonal, SingularReturnsNullopt) {
    Tridiagonal A(2);
    EXPECT_FALSE(solve_tridiagonal(A, {1.0, 1.0}).has_value());
}
