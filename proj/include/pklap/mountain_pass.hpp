#pragma once

// Discrete mountain-pass search: a path of nodes joining x0 to x1 is pulled
// down by preconditioned gradient steps while its highest node climbs along
// the path tangent, until that node is a critical point of J.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pklap/ball.hpp"
#include "pklap/conditions.hpp"
#include "pklap/energy.hpp"
#include "pklap/errors.hpp"

namespace pklap {

struct MountainPassReport {
    GridFunction critical_point = GridFunction::zeros(2);
    /// Energy of the returned node; an upper estimate of the minimax level
    /// over all continuous paths.
    double critical_value = 0.0;
    std::vector<double> path_energy_history;  // max node energy per sweep
    double endpoint_energy0 = 0.0;
    double endpoint_energy1 = 0.0;
    double grad_norm = 0.0;  // sup norm of grad_J at critical_point
    int iterations = 0;
    /// max{J(x0), J(x1)} < L, with L the certified sphere bound.
    bool hypothesis_verified = false;

    bool operator==(const MountainPassReport&) const = default;
};

namespace detail {

inline double y_norm(const Vec& v) { return std::sqrt(y_inner(v, v)); }

/// Moves nodes[first+1 .. last-1] to equal Y-arc-length spacing along the
/// polyline nodes[first .. last]; the two ends stay put.
inline void redistribute(std::vector<Vec>& nodes, std::size_t first, std::size_t last) {
    if (last <= first + 1) return;
    const std::size_t count = last - first;
    std::vector<double> s(count + 1, 0.0);
    for (std::size_t i = 1; i <= count; ++i) {
        s[i] = s[i - 1] + y_norm(axpy(nodes[first + i], -1.0, nodes[first + i - 1]));
    }
    const double total = s[count];
    if (!(total > 0.0)) return;
    std::vector<Vec> old(nodes.begin() + static_cast<long>(first), nodes.begin() + static_cast<long>(last) + 1);
    std::size_t seg = 0;
    for (std::size_t i = 1; i < count; ++i) {
        const double target = total * static_cast<double>(i) / static_cast<double>(count);
        while (seg + 1 < count && s[seg + 1] < target) ++seg;
        const double len = s[seg + 1] - s[seg];
        const double w = len > 0.0 ? (target - s[seg]) / len : 0.0;
        Vec v(old[seg].size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = (1.0 - w) * old[seg][j] + w * old[seg + 1][j];
        nodes[first + i] = std::move(v);
    }
}

inline Vec capped(const Vec& step, double cap) {
    const double n = y_norm(step);
    if (n <= cap || n == 0.0) return step;
    Vec r(step);
    for (auto& x : r) x *= cap / n;
    return r;
}

}  // namespace detail

/// Path-deformation mountain pass between x0 and x1.
///
/// Nodes other than the highest one take capped steps along -A^{-1} grad J
/// (A the Y Gram matrix); the highest node follows the reflected direction
/// -(G - 2<G,t>_Y t), t the unit path tangent, which has the saddle as an
/// attracting fixed point. After each sweep both sub-paths on either side of
/// the highest node are re-spaced by arc length. Once the highest node is
/// stable and its gradient small, the rest of the path is frozen and only
/// that node iterates.
inline MountainPassReport mountain_pass(const ProblemSpec& problem, const GridFunction& x0, const GridFunction& x1) {
    using detail::Vec;
    const int N = problem.options().path_nodes;
    const double grad_tol = problem.tolerances().gradient;

    MountainPassReport rep;
    rep.endpoint_energy0 = energy_J(problem, x0);
    rep.endpoint_energy1 = energy_J(problem, x1);
    const double end_max = std::max(rep.endpoint_energy0, rep.endpoint_energy1);
    const double margin = 1e-12 * (1.0 + std::abs(end_max));
    if (problem.nonlinearity().envelope()) {
        rep.hypothesis_verified = end_max < sphere_energy_lower_bound(problem);
    }

    const Vec a = detail::interior_of(x0);
    const Vec b = detail::interior_of(x1);
    std::vector<Vec> nodes(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        const double s = static_cast<double>(i) / (N - 1);
        Vec v(a.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = (1.0 - s) * a[j] + s * b[j];
        nodes[static_cast<std::size_t>(i)] = std::move(v);
    }
    const double spacing0 = detail::y_norm(detail::axpy(b, -1.0, a)) / (N - 1);

    auto node_gf = [&](std::size_t i) { return GridFunction::from_interior(nodes[i]); };

    std::size_t top = 0;
    double top_energy = -std::numeric_limits<double>::infinity();
    double tau_path = 0.5;
    double tau_climb = 0.5;
    double prev_gn = std::numeric_limits<double>::infinity();
    int stable_top = 0;
    bool frozen = false;
    Vec tangent;
    bool converged = false;

    const int max_iter = problem.options().max_path_iterations;
    for (int it = 0; it < max_iter; ++it) {
        rep.iterations = it + 1;
        if (!frozen) {
            std::size_t arg = 1;
            double emax = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
                const double e = energy_J(problem, node_gf(i));
                if (e > emax) {
                    emax = e;
                    arg = i;
                }
            }
            stable_top = (arg == top) ? stable_top + 1 : 0;
            top = arg;
            top_energy = emax;
            if (top_energy <= end_max + margin) {
                throw SolverError("mountain_pass",
                                  "path collapsed: highest node is not above the endpoints; check that the barrier "
                                  "separates x0 from x1",
                                  node_gf(top));
            }
            Vec t = detail::axpy(nodes[top + 1], -1.0, nodes[top - 1]);
            const double tn = detail::y_norm(t);
            for (auto& x : t) x /= tn;
            tangent = std::move(t);
        } else {
            top_energy = energy_J(problem, node_gf(top));
        }
        rep.path_energy_history.push_back(top_energy);

        const Vec g = detail::interior_of(grad_J(problem, node_gf(top)));
        const double gn = max_abs(g);
        if (gn <= grad_tol) {
            rep.critical_point = node_gf(top);
            rep.critical_value = top_energy;
            rep.grad_norm = gn;
            converged = true;
            break;
        }
        if (gn > prev_gn) {
            tau_climb *= 0.7;
        } else {
            tau_climb = std::min(1.0, tau_climb * 1.02);
        }
        prev_gn = gn;

        // The highest node climbs along the tangent, descends across it.
        const Vec G = detail::sobolev_gradient(g);
        double gt = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) gt += g[j] * tangent[j];
        Vec climb(G);
        for (std::size_t j = 0; j < climb.size(); ++j) climb[j] -= 2.0 * gt * tangent[j];
        for (auto& x : climb) x *= -tau_climb;
        nodes[top] = detail::axpy(nodes[top], 1.0, detail::capped(climb, spacing0));

        if (!frozen) {
            for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
                if (i == top) continue;
                Vec Gi = detail::sobolev_gradient(detail::interior_of(grad_J(problem, node_gf(i))));
                for (auto& x : Gi) x *= -tau_path;
                nodes[i] = detail::axpy(nodes[i], 1.0, detail::capped(Gi, spacing0));
            }
            detail::redistribute(nodes, 0, top);
            detail::redistribute(nodes, top, nodes.size() - 1);
            if (stable_top >= 20 && gn < 1e-3 * (1.0 + max_abs(nodes[top]))) frozen = true;
        }
    }
    if (!converged) {
        throw SolverError("mountain_pass", "iteration budget exhausted before the gradient tolerance", node_gf(top));
    }
    if (!(rep.critical_value >= end_max + margin)) {
        throw SolverError("mountain_pass", "critical value is not above the endpoint energies", rep.critical_point);
    }
    return rep;
}

}  // namespace pklap
