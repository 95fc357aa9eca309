#pragma once

// Positivity certificates and the two-solution pipeline:
// ball minimizer -> lambda0 scan -> mountain pass -> Newton -> certificates.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pklap/ball.hpp"
#include "pklap/conditions.hpp"
#include "pklap/energy.hpp"
#include "pklap/errors.hpp"
#include "pklap/mountain_pass.hpp"
#include "pklap/newton.hpp"

namespace pklap {

struct SolutionCertificate {
    GridFunction solution = GridFunction::zeros(2);
    double residual_sup_norm = 0.0;           // of the auxiliary equation, f at y+
    double original_residual_sup_norm = 0.0;  // of the original equation, f at y
    bool strictly_positive = false;
    double min_value = 0.0;  // min_{k in [1,T]} y(k)
    double energy = 0.0;
    bool certified = false;  // residual within tolerance and strictly positive
    /// Residual within tolerance yet some y(k) <= margin. Exact solutions are
    /// strictly positive, so this marks a numerical defect.
    bool anomaly = false;

    bool operator==(const SolutionCertificate&) const = default;
};

inline SolutionCertificate verify_positive_solution(const ProblemSpec& problem, const GridFunction& y) {
    SolutionCertificate c;
    c.solution = y;
    c.residual_sup_norm = max_abs(residual(problem, y));
    c.original_residual_sup_norm = max_abs(original_residual(problem, y));
    const auto in = y.interior();
    c.min_value = *std::min_element(in.begin(), in.end());
    c.strictly_positive = c.min_value > problem.tolerances().positivity;
    c.energy = energy_J(problem, y);
    const bool small = c.residual_sup_norm <= problem.tolerances().residual;
    c.certified = small && c.strictly_positive;
    c.anomaly = small && !c.strictly_positive;
    return c;
}

/// Thrown by solve_two when (C.2) fails; carries the report.
class ConditionRefusal : public std::runtime_error {
public:
    explicit ConditionRefusal(ConditionReport report)
        : std::runtime_error("condition " + std::string(to_string(report.id)) + " does not hold (lhs " +
                             std::to_string(report.lhs) + ", rhs " + std::to_string(report.rhs) + ")"),
          report_(std::move(report)) {}
    const ConditionReport& report() const { return report_; }

private:
    ConditionReport report_;
};

struct TwoSolutionResult {
    ConditionReport c2;
    double sphere_bound = 0.0;
    MinimizerReport minimizer;
    double lambda0 = 0.0;
    double lambda0_energy = 0.0;
    MountainPassReport mountain_pass;
    SolutionCertificate local_min;
    SolutionCertificate mountain_pass_solution;
    double separation = 0.0;  // sup norm of the difference

    bool operator==(const TwoSolutionResult&) const = default;
};

inline constexpr double distinctness_threshold = 1e-6;

inline TwoSolutionResult solve_two(const ProblemSpec& problem) {
    const auto& env = problem.nonlinearity().envelope();
    if (!env) throw std::invalid_argument("solve_two: nonlinearity has no growth envelope");

    TwoSolutionResult out;
    out.c2 = check_C2(problem.T(), problem.exponents(), *env);
    if (!out.c2.holds) throw ConditionRefusal(out.c2);
    out.sphere_bound = sphere_energy_lower_bound(problem);

    out.minimizer = minimize_in_ball(problem);
    if (!out.minimizer.interior) {
        throw SolverError("minimize_in_ball", "minimizer lies on the sphere although C2 holds", out.minimizer.minimizer);
    }

    const double barrier = std::min(out.sphere_bound, out.minimizer.energy);
    const auto l0 = find_lambda0(problem, barrier);
    out.lambda0 = l0.lambda0;
    out.lambda0_energy = l0.energy;

    const auto x1 = constant_profile(problem.T(), out.lambda0);
    out.mountain_pass = mountain_pass(problem, out.minimizer.minimizer, x1);

    GridFunction y0 = out.minimizer.minimizer;
    GridFunction ystar = out.mountain_pass.critical_point;
    try {
        y0 = newton_polish(problem, y0);
    } catch (SolverError& e) {
        throw SolverError("newton_polish(minimizer)", e.what(), e.best_iterate());
    }
    try {
        ystar = newton_polish(problem, ystar);
    } catch (SolverError& e) {
        throw SolverError("newton_polish(mountain pass)", e.what(), e.best_iterate());
    }

    out.local_min = verify_positive_solution(problem, y0);
    out.mountain_pass_solution = verify_positive_solution(problem, ystar);

    double sep = 0.0;
    for (int k = 1; k <= problem.T(); ++k) sep = std::max(sep, std::abs(y0(k) - ystar(k)));
    out.separation = sep;
    if (!(sep > distinctness_threshold)) {
        throw SolverError("solve_two", "the two critical points coincide numerically (separation " +
                                           std::to_string(sep) + ")");
    }
    if (!(out.local_min.energy < out.mountain_pass_solution.energy)) {
        throw SolverError("solve_two", "J(y0) is not below the mountain-pass level");
    }
    return out;
}

}  // namespace pklap
