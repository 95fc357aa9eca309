#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "support.hpp"

using namespace pklap;
namespace t = pklap::test;
using Dec = boost::multiprecision::cpp_dec_float_50;

namespace {

GridFunction full(std::vector<double> v) { return GridFunction::from_full(v); }

/// Sum over k of phi2 + psi2 for the Example 1 envelope, in 50 digits.
Dec example1_envelope_total(int T, Dec* phi2_over_m_total = nullptr, double m = 0.0) {
    const Dec pi = boost::math::constants::pi<Dec>();
    const Dec T2 = Dec(T) * T;
    Dec H = 0;
    for (int k = 1; k <= T; ++k) H += Dec(1) / k;
    const Dec phi2 = (4 + pi) / (2 * T2) * H;
    const Dec psi2 = Dec(2) * T / (T2 * T);
    if (phi2_over_m_total) *phi2_over_m_total = phi2 / Dec(m) + psi2;
    return phi2 + psi2;
}

Dec geometric_constant(int T, int p_plus) {
    return pow(Dec(T), Dec(p_plus - 2) / 2) / pow(Dec(T + 1), Dec(p_plus) / 2);
}

double rel(double got, const Dec& want) {
    return std::abs(got - want.convert_to<double>()) / std::abs(want.convert_to<double>());
}

GrowthEnvelope uniform_envelope(int T, double m, double phi, double psi) {
    std::vector<double> a(T, phi), b(T, psi);
    return GrowthEnvelope(m, a, a, b, b);
}

}  // namespace

TEST(CheckC1, Example1EnvelopeHoldsOnDenseGrid) {
    const auto p = t::example1_problem(10, 4.0, 1.0);
    const auto grid = sample_grid(0.0, 100.0, 0.01);
    ASSERT_EQ(grid.size(), 10001u);
    const auto rep = check_C1(p, grid);
    EXPECT_TRUE(rep.holds);
    EXPECT_FALSE(rep.witness.has_value());
    EXPECT_EQ(rep.sample_count, 10 * (10001 + 2));
    EXPECT_GE(rep.lhs, 0.0);
}

TEST(CheckC1, ExactEnvelopeHoldsWithEquality) {
    const int T = 5;
    const ProblemSpec p(T, ExponentMap::constant(T, 2.0),
                        families::power(std::vector<double>(T, 1.0), std::vector<double>(T, 1.0), 4.0));
    const auto rep = check_C1(p, sample_grid(0.0, 10.0, 0.01));
    EXPECT_TRUE(rep.holds);
    EXPECT_EQ(rep.lhs, 0.0);
}

TEST(CheckC1, DoubledPhi1FailsAtFirstViolationFoundByBruteForce) {
    const int T = 10;
    const double m = 4.0;
    const auto base = families::example1(T, m);
    const auto& e = *base.envelope();
    std::vector<double> phi1(T), phi2(T), psi1(T), psi2(T);
    for (int k = 1; k <= T; ++k) {
        phi1[k - 1] = 2.0 * e.phi1(k);
        phi2[k - 1] = e.phi2(k);
        psi1[k - 1] = e.psi1(k);
        psi2[k - 1] = e.psi2(k);
    }
    const ProblemSpec p(T, ExponentMap::constant(T, 2.0),
                        Nonlinearity("doubled", [base](int k, double y) { return base(k, y); },
                                     GrowthEnvelope(m, phi1, phi2, psi1, psi2)));
    const auto grid = sample_grid(0.0, 100.0, 0.01);
    const auto rep = check_C1(p, grid);
    ASSERT_FALSE(rep.holds);
    ASSERT_TRUE(rep.witness.has_value());

    // Brute force: first (y, k) in y-major order with f below the doubled lower envelope.
    std::optional<SampleWitness> first;
    for (double y : grid) {
        for (int k = 1; k <= T && !first; ++k) {
            const double lower = 1.0 / (T * T * T) + 4.0 / (T * T * k) * y * y * y;
            if (t::example1_f(T, m, 1.0, k, y) < lower) first = SampleWitness{k, y};
        }
        if (first) break;
    }
    ASSERT_TRUE(first.has_value());
    EXPECT_EQ(*rep.witness, *first);
    EXPECT_LT(rep.witness->y, 1.0);  // near the origin
    EXPECT_LT(rep.lhs, 0.0);
}

TEST(CheckC1, RejectsNegativeGridAndMissingEnvelope) {
    const auto p = t::example1_problem(3, 4.0, 1.0);
    const std::vector<double> bad{-1.0, 0.0};
    EXPECT_THROW(check_C1(p, bad), std::invalid_argument);
    EXPECT_THROW(check_C1(t::linear_problem(3, 1.0), std::vector<double>{0.0}), std::invalid_argument);
}

TEST(CheckC2, Example2AgainstHighPrecisionOracle) {
    const int T = 200;
    const auto env = *families::example1(T, 19.0).envelope();
    const auto rep = check_C2(T, ExponentMap::constant(T, 18.0), env);
    const Dec lhs = geometric_constant(T, 18);
    const Dec rhs = example1_envelope_total(T);
    EXPECT_TRUE(rep.holds);
    EXPECT_LE(rel(rep.lhs, lhs), 1e-12);
    EXPECT_LE(rel(rep.rhs, rhs), 1e-12);
    EXPECT_NEAR(rep.lhs, 4.78e-3, 0.005e-3);
    EXPECT_NEAR(rep.rhs, 5.75e-4, 0.005e-4);
}

TEST(CheckC2, QuadraticExponentCollapsesToReciprocal) {
    const auto rep = check_C2(2, ExponentMap::constant(2, 2.0), uniform_envelope(2, 4.0, 0.01, 0.01));
    EXPECT_DOUBLE_EQ(rep.lhs, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(rep.rhs, 0.04);
    EXPECT_TRUE(rep.holds);
}

TEST(CheckC2, LargeParametersDoNotOverflow) {
    const int T = 5000;
    const auto rep = check_C2(T, ExponentMap::constant(T, 300.0), *families::example1(T, 301.0).envelope());
    EXPECT_TRUE(std::isfinite(rep.lhs));
    EXPECT_GT(rep.lhs, 0.0);
}

TEST(CheckC2, MonotoneInEnvelopeScale) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int T = t::uniform_int(rng, 2, 60);
        const auto exps = t::random_exponents(rng, T, 2.0, 5.0);
        bool seen_false = false;
        for (double s = 0.01; s < 100.0; s *= 1.3) {
            const auto rep = check_C2(T, exps, *families::example1(T, 6.0, s).envelope());
            if (seen_false) {
                ASSERT_FALSE(rep.holds) << "flipped back at scale " << s;
            }
            seen_false = seen_false || !rep.holds;
        }
    }
}

TEST(CheckC2, ThresholdScaleSeparatesVerdicts) {
    const int T = 10;
    const auto exps = ExponentMap::constant(T, 2.0);
    const double s_star = c2_threshold_scale(T, exps, *families::example1(T, 4.0).envelope());
    EXPECT_NEAR(s_star, 0.72968, 1e-5);
    EXPECT_TRUE(check_C2(T, exps, *families::example1(T, 4.0, s_star * (1 - 1e-9)).envelope()).holds);
    EXPECT_FALSE(check_C2(T, exps, *families::example1(T, 4.0, s_star * (1 + 1e-9)).envelope()).holds);
}

TEST(NormInequalities, Examples) {
    NormInequalityArgs args;
    args.m = 2.0;
    const auto a3 = check_norm_inequality(ConditionId::A3, full({0, 1, 1, 0}), args);
    EXPECT_DOUBLE_EQ(*a3.lower, 2.0);
    EXPECT_DOUBLE_EQ(a3.lhs, 2.0);
    EXPECT_DOUBLE_EQ(a3.rhs, 6.0);
    EXPECT_TRUE(a3.holds);

    for (int T : {2, 5, 17}) {
        for (double m : {2.0, 3.5, 6.0}) {
            args.m = m;
            const double lambda = -1.7;
            const auto a5 = check_norm_inequality(ConditionId::A5, constant_profile(T, lambda), args);
            EXPECT_NEAR(a5.lhs, 2 * std::pow(std::abs(lambda), m), 1e-12);
            EXPECT_NEAR(a5.rhs, std::pow(2.0, m) * T * std::pow(std::abs(lambda), m), 1e-9);
            EXPECT_TRUE(a5.holds);
        }
    }
}

TEST(NormInequalities, HypothesisGates) {
    const auto p = ExponentMap::constant(2, 3.0);
    NormInequalityArgs args;
    args.exponents = &p;
    EXPECT_THROW(check_norm_inequality(ConditionId::A1, full({0, 0.1, 0.1, 0}), args), HypothesisError);
    EXPECT_THROW(check_norm_inequality(ConditionId::A2, full({0, 3, 3, 0}), args), HypothesisError);
    args.holder_p = 2.0;
    args.holder_q = 3.0;
    EXPECT_THROW(check_norm_inequality(ConditionId::A6, full({0, 1, 1, 0}), args), HypothesisError);
    args.m = 1.5;
    EXPECT_THROW(check_norm_inequality(ConditionId::A3, full({0, 1, 1, 0}), args), HypothesisError);
    EXPECT_THROW(check_norm_inequality(ConditionId::C2, full({0, 1, 1, 0}), args), std::invalid_argument);
}

namespace {

// The acceptance distribution: T in [2,50], p in [2,6], y entries in [-10,10].
struct RandomCase {
    int T;
    ExponentMap p;
    GridFunction y;
    double m, hp, hq;
};

RandomCase draw(std::mt19937_64& rng) {
    const int T = t::uniform_int(rng, 2, 50);
    auto p = t::random_exponents(rng, T);
    auto y = t::random_grid(rng, T);
    const double m = t::uniform(rng, 2.0, 6.0);
    const double hp = t::uniform(rng, 1.1, 6.0);
    return {T, std::move(p), std::move(y), m, hp, hp / (hp - 1.0)};
}

int violations(ConditionId id, int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int i = 0; i < trials; ++i) {
        auto c = draw(rng);
        auto y = c.y;
        if (id == ConditionId::A1) {
            const double n = h_norm(y);
            if (n <= 1.0) y = t::scaled(y, 2.0 / n);
        }
        NormInequalityArgs args{&c.p, c.m, c.hp, c.hq};
        if (!check_norm_inequality(id, y, args).holds) ++bad;
    }
    return bad;
}

}  // namespace

TEST(NormInequalities, RandomizedA3A4A5A6) {
    EXPECT_EQ(violations(ConditionId::A3, 10000, 33), 0);
    EXPECT_EQ(violations(ConditionId::A4, 10000, 34), 0);
    EXPECT_EQ(violations(ConditionId::A5, 10000, 35), 0);
    EXPECT_EQ(violations(ConditionId::A6, 10000, 36), 0);
}

TEST(NormInequalities, A2HoldsForQuadraticExponents) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 10000; ++i) {
        const int T = t::uniform_int(rng, 2, 50);
        const auto p = ExponentMap::constant(T, 2.0);
        auto y = t::random_grid(rng, T);
        y = t::scaled(y, t::uniform(rng, 0.0, 1.0) / h_norm(y));
        NormInequalityArgs args;
        args.exponents = &p;
        const auto rep = check_norm_inequality(ConditionId::A2, y, args);
        ASSERT_LE(std::abs(rep.lhs - rep.rhs), 1e-12 * std::max(1.0, rep.rhs));
    }
}

TEST(NormInequalities, A2CounterexampleForSuperquadraticExponent) {
    // p == 4, T = 2, y = (0, a, a, 0): sum |dy|^4 = 2a^4 but T^{(p+-2)/2} ||y||^4 = 8a^4.
    const auto p = ExponentMap::constant(2, 4.0);
    NormInequalityArgs args;
    args.exponents = &p;
    const auto rep = check_norm_inequality(ConditionId::A2, full({0, 0.5, 0.5, 0}), args);
    EXPECT_DOUBLE_EQ(rep.lhs, 2 * std::pow(0.5, 4));
    EXPECT_DOUBLE_EQ(rep.rhs, 8 * std::pow(0.5, 4));
    EXPECT_FALSE(rep.holds);
}

TEST(NormInequalities, A1Counterexample) {
    // T = 3, p == 4, y = (0, 2, 4, 2, 0): 64 < 3^{-1} 16^2 - 3.
    const auto p = ExponentMap::constant(3, 4.0);
    NormInequalityArgs args;
    args.exponents = &p;
    const auto rep = check_norm_inequality(ConditionId::A1, full({0, 2, 4, 2, 0}), args);
    EXPECT_DOUBLE_EQ(rep.lhs, 64.0);
    EXPECT_NEAR(rep.rhs, 256.0 / 3.0 - 3.0, 1e-12);
    EXPECT_FALSE(rep.holds);
}

TEST(SphereBound, Examples) {
    const int T = 2;
    const ProblemSpec p(T, ExponentMap::constant(T, 2.0),
                        families::power(std::vector<double>(T, 0.01), std::vector<double>(T, 0.01), 4.0));
    EXPECT_DOUBLE_EQ(sphere_energy_lower_bound(p), 1.0 / 6.0 - 0.025);

    const auto q = t::example1_problem(7, 4.0, 0.3);
    double total = 0.0;
    for (int k = 1; k <= 7; ++k) total += q.nonlinearity().envelope()->phi2(k) / 4.0 + q.nonlinearity().envelope()->psi2(k);
    EXPECT_NEAR(sphere_energy_lower_bound(q), 1.0 / 16.0 - total, 1e-15);
}

TEST(SphereBound, Example2AgainstHighPrecisionOracle) {
    const int T = 200;
    const ProblemSpec p(T, ExponentMap::constant(T, 18.0), families::example1(T, 19.0));
    Dec sub = 0;
    example1_envelope_total(T, &sub, 19.0);
    const Dec L = geometric_constant(T, 18) / 18 - sub;
    EXPECT_LE(std::abs(sphere_energy_lower_bound(p) - L.convert_to<double>()), 1e-12 * std::abs(L.convert_to<double>()));
}

TEST(SphereBound, BelowEnergyOnSphereSamples) {
    // Quadratic exponents only: for p+ > 2 the bound is not valid.
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const int T = t::uniform_int(rng, 2, 30);
        const auto p = t::example1_problem(T, t::uniform(rng, 2.5, 6.0), t::uniform(rng, 0.05, 3.0));
        ASSERT_TRUE(check_C1(p, sample_grid(0.0, 10.0, 0.05)).holds);
        const double L = sphere_energy_lower_bound(p);
        for (int s = 0; s < 10; ++s) {
            auto y = t::random_grid(rng, T, -1.0, 1.0);
            y = t::scaled(y, 1.0 / (std::sqrt(T + 1.0) * h_norm(y)));
            ASSERT_LE(L, energy_J(p, y) + 1e-14);
        }
    }
}

TEST(ConditionId, RoundTripsThroughStrings) {
    for (auto id : {ConditionId::C1, ConditionId::C2, ConditionId::A1, ConditionId::A2, ConditionId::A3,
                    ConditionId::A4, ConditionId::A5, ConditionId::A6}) {
        EXPECT_EQ(condition_id_from_string(to_string(id)), id);
    }
    EXPECT_THROW(condition_id_from_string("A7"), std::invalid_argument);
}
