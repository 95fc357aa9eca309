#pragma once

// Shared fixtures, seeded generators and independent oracles for the tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pklap.hpp"

namespace pklap::test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline GridFunction random_grid(std::mt19937_64& rng, int T, double lo = -10.0, double hi = 10.0) {
    std::vector<double> v(static_cast<std::size_t>(T));
    for (auto& x : v) x = uniform(rng, lo, hi);
    return GridFunction::from_interior(v);
}

inline ExponentMap random_exponents(std::mt19937_64& rng, int T, double lo = 2.0, double hi = 6.0) {
    std::vector<double> p(static_cast<std::size_t>(T) + 2);
    for (auto& x : p) x = uniform(rng, lo, hi);
    return ExponentMap(p);
}

inline GridFunction scaled(const GridFunction& y, double s) {
    std::vector<double> v(y.interior().begin(), y.interior().end());
    for (auto& x : v) x *= s;
    return GridFunction::from_interior(v);
}

/// p == 2, f == c.
inline ProblemSpec linear_problem(int T, double c) {
    return ProblemSpec(T, ExponentMap::constant(T, 2.0), families::constant(c));
}

inline ProblemSpec example1_problem(int T, double m, double scale, double p = 2.0) {
    return ProblemSpec(T, ExponentMap::constant(T, p), families::example1(T, m, scale));
}

/// Example 1 nonlinearity written out independently of the library.
inline double example1_f(int T, double m, double scale, int k, double y) {
    const double Td = T;
    const double s = std::sin(static_cast<double>(k));
    return scale * (std::pow(std::abs(y), m - 2.0) * y * (2.0 + std::atan(y)) / (Td * Td * k) +
                    (s * s * std::exp(-std::abs(y)) + 1.0) / (Td * Td * Td));
}

/// F(k, y) by 61-point Gauss-Kronrod, independent of the library quadrature.
inline double oracle_F_example1(int T, double m, double scale, int k, double y) {
    if (y == 0.0) return 0.0;
    auto f = [&](double s) { return example1_f(T, m, scale, k, s); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, y, 15, 1e-15);
}

/// Straight-line J for the Example 1 family at y >= 0.
inline double oracle_J_example1(int T, double m, double scale, const ExponentMap& p, const GridFunction& y) {
    double kin = 0.0;
    for (int j = 0; j <= T; ++j) {
        const double d = y(j + 1) - y(j);
        kin += std::pow(std::abs(d), p(j)) / p(j);
    }
    double pot = 0.0;
    for (int k = 1; k <= T; ++k) pot += oracle_F_example1(T, m, scale, k, std::max(0.0, y(k)));
    return kin - pot;
}

}  // namespace pklap::test
