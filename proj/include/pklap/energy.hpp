#pragma once

// The energy functional J, its gradient and the residual of
//   Delta(|Delta y(k-1)|^{p(k-1)-2} Delta y(k-1)) + f(k, y+(k)) = 0.

#include <cmath>
#include <span>
#include <vector>

#include "pklap/grid.hpp"
#include "pklap/problem.hpp"
#include "pklap/quadrature.hpp"

namespace pklap {

/// |t|^{p-2} t
inline double flux(double t, double p) {
    if (t == 0.0) return 0.0;
    return std::pow(std::abs(t), p - 2.0) * t;
}

/// d/dt |t|^{p-2} t = (p-1)|t|^{p-2}
inline double flux_derivative(double t, double p) {
    if (p == 2.0) return 1.0;
    if (t == 0.0) return 0.0;
    return (p - 1.0) * std::pow(std::abs(t), p - 2.0);
}

/// a(j) = |Delta y(j)|^{p(j)-2} Delta y(j), j = 0..T.
inline std::vector<double> fluxes(const ExponentMap& p, const GridFunction& y) {
    const auto d = forward_difference(y);
    std::vector<double> a(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) a[j] = flux(d[j], p(static_cast<int>(j)));
    return a;
}

/// sum_{k=1}^{T+1} |Delta y(k-1)|^{p(k-1)} / p(k-1)
inline double kinetic_energy(const ExponentMap& p, const GridFunction& y) {
    const auto d = forward_difference(y);
    double s = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        const double pj = p(static_cast<int>(j));
        s += std::pow(std::abs(d[j]), pj) / pj;
    }
    return s;
}

/// F(k, y) = int_0^y f(k, s) ds. Closed form when the nonlinearity has one,
/// otherwise memoized adaptive Simpson at the problem's quadrature tolerance.
inline double primitive_F(const ProblemSpec& problem, int k, double y) {
    if (k < 1 || k > problem.T()) throw std::out_of_range("primitive_F: k outside [1, T]");
    if (y == 0.0) return 0.0;
    const auto& nl = problem.nonlinearity();
    if (nl.has_closed_form()) return nl.closed_form()(k, y);
    const double tol = problem.tolerances().quadrature;
    return nl.cache().get_or_compute(k, y, [&] {
        const std::function<double(double)> integrand = [&nl, k](double s) { return nl(k, s); };
        return adaptive_simpson(integrand, 0.0, y, tol);
    });
}

/// Potential of s -> f(k, s+): F(k, y) for y >= 0 and f(k, 0) y for y < 0.
/// Its derivative is f(k, y+(k)) everywhere, so J is C^1.
inline double nonlinear_potential(const ProblemSpec& problem, int k, double y) {
    if (y >= 0.0) return primitive_F(problem, k, y);
    return problem.f(k, 0.0) * y;
}

/// J(y) = sum_{k=1}^{T+1} |Delta y(k-1)|^{p(k-1)}/p(k-1) - sum_{k=1}^{T} G(k, y(k))
/// with G the potential of f(k, .+). On y >= 0 this is sum F(k, y+(k)).
inline double energy_J(const ProblemSpec& problem, const GridFunction& y) {
    double potential = 0.0;
    for (int k = 1; k <= problem.T(); ++k) potential += nonlinear_potential(problem, k, y(k));
    return kinetic_energy(problem.exponents(), y) - potential;
}

/// l2 representative of J'(y): <J'(y), v> = sum_{k=1}^{T} g(k) v(k).
/// g(k) = a(k-1) - a(k) - f(k, y+(k)); g(0) = g(T+1) = 0.
inline GridFunction grad_J(const ProblemSpec& problem, const GridFunction& y) {
    const auto a = fluxes(problem.exponents(), y);
    std::vector<double> g(static_cast<std::size_t>(problem.T()));
    for (int k = 1; k <= problem.T(); ++k) {
        g[k - 1] = (a[k - 1] - a[k]) - problem.f(k, std::max(y(k), 0.0));
    }
    return GridFunction::from_interior(g);
}

/// r(k) = a(k) - a(k-1) + f(k, y+(k)), k = 1..T.
inline std::vector<double> residual(const ProblemSpec& problem, const GridFunction& y) {
    const auto a = fluxes(problem.exponents(), y);
    std::vector<double> r(static_cast<std::size_t>(problem.T()));
    for (int k = 1; k <= problem.T(); ++k) {
        r[k - 1] = (a[k] - a[k - 1]) + problem.f(k, std::max(y(k), 0.0));
    }
    return r;
}

/// Residual of the original equation, with f evaluated at y(k) itself.
inline std::vector<double> original_residual(const ProblemSpec& problem, const GridFunction& y) {
    const auto a = fluxes(problem.exponents(), y);
    std::vector<double> r(static_cast<std::size_t>(problem.T()));
    for (int k = 1; k <= problem.T(); ++k) r[k - 1] = (a[k] - a[k - 1]) + problem.f(k, y(k));
    return r;
}

/// <J'(y), v> evaluated in the weak form, without summation by parts:
/// sum_{k=1}^{T+1} a(k-1) Delta v(k-1) - sum_{k=1}^{T} f(k, y+(k)) v(k).
inline double weak_derivative(const ProblemSpec& problem, const GridFunction& y, const GridFunction& v) {
    const auto a = fluxes(problem.exponents(), y);
    const auto dv = forward_difference(v);
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * dv[j];
    double t = 0.0;
    for (int k = 1; k <= problem.T(); ++k) t += problem.f(k, std::max(y(k), 0.0)) * v(k);
    return s - t;
}

/// sum_{k=1}^{T} u(k) v(k)
inline double l2_pairing(const GridFunction& u, const GridFunction& v) {
    double s = 0.0;
    for (int k = 1; k <= u.T(); ++k) s += u(k) * v(k);
    return s;
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace pklap
