#pragma once

// Damped Newton on the nonlinear tridiagonal system residual(y) = 0.

#include <algorithm>
#include <cmath>
#include <vector>

#include "pklap/energy.hpp"
#include "pklap/errors.hpp"
#include "pklap/tridiagonal.hpp"

namespace pklap {

/// d/dy f(k, y+) by central differences with h = 1e-6 (1 + |y|); zero for y <= 0.
inline double nonlinearity_slope(const ProblemSpec& problem, int k, double y) {
    if (y <= 0.0) return 0.0;
    const double h = 1e-6 * (1.0 + std::abs(y));
    return (problem.f(k, y + h) - problem.f(k, y - h)) / (2.0 * h);
}

/// Jacobian of residual(problem, .) at y, over the interior unknowns y(1..T).
///   d r(k)/d y(k-1) = a'(k-1),  d r(k)/d y(k+1) = a'(k),
///   d r(k)/d y(k)   = -a'(k-1) - a'(k) + d f(k, y+(k))/dy,
/// with a'(j) = (p(j) - 1)|Delta y(j)|^{p(j)-2}.
inline Tridiagonal residual_jacobian(const ProblemSpec& problem, const GridFunction& y) {
    const int T = problem.T();
    const auto d = forward_difference(y);
    std::vector<double> ap(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) ap[j] = flux_derivative(d[j], problem.exponents()(static_cast<int>(j)));
    Tridiagonal Jr(static_cast<std::size_t>(T));
    for (int k = 1; k <= T; ++k) {
        const auto i = static_cast<std::size_t>(k - 1);
        Jr.diag[i] = -ap[k - 1] - ap[k] + nonlinearity_slope(problem, k, y(k));
        if (k > 1) Jr.sub[i - 1] = ap[k - 1];
        if (k < T) Jr.super[i] = ap[k];
    }
    return Jr;
}

/// Solves A x = b, adding 1e-12 (then 1e-10, 1e-8) to the diagonal when a
/// pivot vanishes. Returns nullopt if all attempts are singular.
inline std::optional<std::vector<double>> solve_regularized(const Tridiagonal& A, const std::vector<double>& b) {
    if (auto x = solve_tridiagonal(A, b)) return x;
    for (double shift : {1e-12, 1e-10, 1e-8}) {
        Tridiagonal R = A;
        for (auto& v : R.diag) v += shift;
        if (auto x = solve_tridiagonal(R, b)) return x;
    }
    return std::nullopt;
}

inline double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Damped Newton on y -> residual(problem, y).
///
/// Steps are halved until the Euclidean residual norm decreases. Once the
/// sup norm is within the residual tolerance, up to three further steps are
/// taken while they keep reducing it.
inline GridFunction newton_polish(const ProblemSpec& problem, const GridFunction& y_init) {
    const double tol = problem.tolerances().residual;
    const int max_iter = problem.options().max_newton_iterations;

    GridFunction y = y_init;
    auto r = residual(problem, y);
    double rnorm = l2_norm(r);
    GridFunction best = y;
    double best_sup = max_abs(r);
    int extra = 0;

    for (int it = 0; it < max_iter; ++it) {
        if (max_abs(r) <= tol) {
            if (extra >= 3 || max_abs(r) == 0.0) break;
            ++extra;
        }
        auto Jr = residual_jacobian(problem, y);
        std::vector<double> rhs(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
        auto step = solve_regularized(Jr, rhs);
        if (!step) throw SolverError("newton_polish", "Jacobian singular after regularization", best);

        bool accepted = false;
        double alpha = 1.0;
        const auto yi = y.interior();
        for (int ls = 0; ls < 40; ++ls) {
            std::vector<double> trial(yi.begin(), yi.end());
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += alpha * (*step)[i];
            auto ytrial = GridFunction::from_interior(trial);
            auto rtrial = residual(problem, ytrial);
            const double tn = l2_norm(rtrial);
            if (std::isfinite(tn) && tn < (1.0 - 1e-4 * alpha) * rnorm) {
                y = std::move(ytrial);
                r = std::move(rtrial);
                rnorm = tn;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (max_abs(r) < best_sup) {
            best = y;
            best_sup = max_abs(r);
        }
        if (!accepted) break;
    }
    if (best_sup > tol) {
        throw SolverError("newton_polish",
                          "residual " + std::to_string(best_sup) + " above tolerance " + std::to_string(tol), best);
    }
    return best;
}

}  // namespace pklap
