#pragma once

// Executable checks of the growth condition (C.1), the smallness condition
// (C.2), the norm inequalities A1-A6 and the sphere energy lower bound.

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pklap/energy.hpp"
#include "pklap/grid.hpp"
#include "pklap/problem.hpp"

namespace pklap {

enum class ConditionId { C1, C2, A1, A2, A3, A4, A5, A6 };

inline const char* to_string(ConditionId id) {
    switch (id) {
        case ConditionId::C1: return "C1";
        case ConditionId::C2: return "C2";
        case ConditionId::A1: return "A1";
        case ConditionId::A2: return "A2";
        case ConditionId::A3: return "A3";
        case ConditionId::A4: return "A4";
        case ConditionId::A5: return "A5";
        case ConditionId::A6: return "A6";
    }
    return "?";
}

inline ConditionId condition_id_from_string(const std::string& s) {
    for (auto id : {ConditionId::C1, ConditionId::C2, ConditionId::A1, ConditionId::A2, ConditionId::A3,
                    ConditionId::A4, ConditionId::A5, ConditionId::A6}) {
        if (s == to_string(id)) return id;
    }
    throw std::invalid_argument("unknown condition id '" + s + "'");
}

struct SampleWitness {
    int k;
    double y;
    bool operator==(const SampleWitness&) const = default;
};

/// Verdict of one condition check.
///
/// Direction conventions for (lhs, rhs):
///   C1: lhs = smallest envelope slack over all samples, rhs = 0, holds iff lhs >= rhs
///   C2: holds iff lhs > rhs
///   A1, A2: holds iff lhs >= rhs
///   A3: holds iff lower <= lhs <= rhs
///   A4, A5, A6: holds iff lhs <= rhs
struct ConditionReport {
    ConditionId id = ConditionId::C1;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> lower;
    bool holds = false;
    std::optional<SampleWitness> witness;
    int sample_count = 0;
    std::string note;

    bool operator==(const ConditionReport&) const = default;
};

/// Raised when a norm inequality is asked about y outside its hypothesis.
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Checks psi1(k) + phi1(k) y^{m-1} <= f(k, y) <= phi2(k) y^{m-1} + psi2(k)
/// at every (k, y) with k in [1, T], y in y_grid, plus y = 1e3 and 1e6.
/// Samples are visited y-major; the first violation becomes the witness.
inline ConditionReport check_C1(const ProblemSpec& problem, std::span<const double> y_grid) {
    const auto& env = problem.nonlinearity().envelope();
    if (!env) throw std::invalid_argument("check_C1: nonlinearity has no growth envelope");
    std::vector<double> ys(y_grid.begin(), y_grid.end());
    for (double y : ys) {
        if (!(y >= 0.0)) throw std::invalid_argument("check_C1: sample grid must lie in [0, inf)");
    }
    ys.push_back(1e3);
    ys.push_back(1e6);

    ConditionReport rep;
    rep.id = ConditionId::C1;
    rep.rhs = 0.0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (double y : ys) {
        for (int k = 1; k <= problem.T(); ++k) {
            const double fy = problem.f(k, y);
            const double slack = std::min(fy - env->lower(k, y), env->upper(k, y) - fy);
            ++rep.sample_count;
            if (!(slack >= 0.0) && !rep.witness) rep.witness = SampleWitness{k, y};
            min_slack = std::min(min_slack, slack);
        }
    }
    rep.lhs = min_slack;
    rep.holds = !rep.witness.has_value();
    return rep;
}

/// Evenly spaced samples lo, lo+step, ..., up to hi inclusive.
inline std::vector<double> sample_grid(double lo, double hi, double step) {
    std::vector<double> g;
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    g.reserve(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
}

namespace detail {

/// T^{(p-2)/2} (T+1)^{-p/2}, evaluated in log space.
inline double c2_geometric_constant(int T, double p_plus) {
    return std::exp(0.5 * (p_plus - 2.0) * std::log(static_cast<double>(T)) -
                    0.5 * p_plus * std::log(static_cast<double>(T) + 1.0));
}

/// Kahan-compensated sum, left to right.
class CompensatedSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline double power_sum(std::span<const double> d, const ExponentMap& p) {
    double s = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) s += std::pow(std::abs(d[j]), p(static_cast<int>(j)));
    return s;
}

inline double power_sum(std::span<const double> d, double m) {
    double s = 0.0;
    for (double x : d) s += std::pow(std::abs(x), m);
    return s;
}

}  // namespace detail

/// lhs = T^{(p+ - 2)/2} (1/sqrt(T+1))^{p+}, rhs = sum_k (phi2(k) + psi2(k)); holds iff lhs > rhs.
inline ConditionReport check_C2(int T, const ExponentMap& exponents, const GrowthEnvelope& envelope) {
    if (exponents.T() != T || envelope.T() != T) throw std::invalid_argument("check_C2: inconsistent T");
    ConditionReport rep;
    rep.id = ConditionId::C2;
    rep.lhs = detail::c2_geometric_constant(T, exponents.p_plus());
    detail::CompensatedSum sum;
    for (int k = 1; k <= T; ++k) {
        sum.add(envelope.phi2(k));
        sum.add(envelope.psi2(k));
    }
    rep.rhs = sum.value();
    rep.holds = rep.lhs > rep.rhs;
    return rep;
}

inline ConditionReport check_C2(const ProblemSpec& problem) {
    const auto& env = problem.nonlinearity().envelope();
    if (!env) throw std::invalid_argument("check_C2: nonlinearity has no growth envelope");
    return check_C2(problem.T(), problem.exponents(), *env);
}

/// Envelope scale s* = lhs/rhs at which (C.2) flips when phi2, psi2 are
/// multiplied by s: holds for s < s*, fails for s >= s*.
inline double c2_threshold_scale(int T, const ExponentMap& exponents, const GrowthEnvelope& envelope) {
    const auto rep = check_C2(T, exponents, envelope);
    return rep.lhs / rep.rhs;
}

struct NormInequalityArgs {
    const ExponentMap* exponents = nullptr;  // A1, A2, A4
    double m = 2.0;                          // A3, A5
    double holder_p = 2.0;                   // A6
    double holder_q = 2.0;                   // A6
};

/// Evaluates both sides of one of the inequalities A1-A6 at y.
/// Throws HypothesisError when y or the parameters fall outside the
/// inequality's hypothesis.
inline ConditionReport check_norm_inequality(ConditionId id, const GridFunction& y, const NormInequalityArgs& args) {
    const int T = y.T();
    const auto d = forward_difference(y);
    const double norm_sq = h_norm_squared(y);
    // ||y||^e computed as (||y||^2)^{e/2}
    auto norm_pow = [norm_sq](double e) { return std::pow(norm_sq, 0.5 * e); };
    auto need_exponents = [&]() -> const ExponentMap& {
        if (args.exponents == nullptr) throw std::invalid_argument("check_norm_inequality: exponent map required");
        if (args.exponents->T() != T) throw std::invalid_argument("check_norm_inequality: exponent map length differs from T+2");
        return *args.exponents;
    };

    ConditionReport rep;
    rep.id = id;
    switch (id) {
        case ConditionId::A1: {
            const auto& p = need_exponents();
            if (!(norm_sq > 1.0)) throw HypothesisError("A1 requires ||y|| > 1");
            rep.lhs = detail::power_sum(d, p);
            rep.rhs = std::pow(static_cast<double>(T), 0.5 * (2.0 - p.p_minus())) * norm_pow(p.p_minus()) - T;
            rep.holds = rep.lhs >= rep.rhs;
            break;
        }
        case ConditionId::A2: {
            const auto& p = need_exponents();
            if (!(norm_sq <= 1.0)) throw HypothesisError("A2 requires ||y|| <= 1");
            rep.lhs = detail::power_sum(d, p);
            rep.rhs = std::pow(static_cast<double>(T), 0.5 * (p.p_plus() - 2.0)) * norm_pow(p.p_plus());
            rep.holds = rep.lhs >= rep.rhs;
            break;
        }
        case ConditionId::A3: {
            if (!(args.m >= 2.0)) throw HypothesisError("A3 requires m >= 2");
            const double npow = norm_pow(args.m);
            rep.lhs = detail::power_sum(d, args.m);
            rep.lower = std::pow(T + 1.0, 0.5 * (2.0 - args.m)) * npow;
            rep.rhs = (T + 1.0) * npow;
            rep.holds = *rep.lower <= rep.lhs && rep.lhs <= rep.rhs;
            break;
        }
        case ConditionId::A4: {
            // Constant C_{p+} = 1 in the sharpened form (T+1)(||y||^{p+} + 1);
            // the weaker 2^{p+}(T+1)(||y||^{p+} + 1) then holds a fortiori.
            const auto& p = need_exponents();
            rep.lhs = detail::power_sum(d, p);
            rep.rhs = (T + 1.0) * (norm_pow(p.p_plus()) + 1.0);
            rep.holds = rep.lhs <= rep.rhs;
            break;
        }
        case ConditionId::A5: {
            if (!(args.m >= 2.0)) throw HypothesisError("A5 requires m >= 2");
            rep.lhs = detail::power_sum(d, args.m);
            rep.rhs = std::pow(2.0, args.m) * detail::power_sum(y.interior(), args.m);
            rep.holds = rep.lhs <= rep.rhs;
            break;
        }
        case ConditionId::A6: {
            const double hp = args.holder_p, hq = args.holder_q;
            if (!(hp > 1.0) || !(hq > 1.0)) throw HypothesisError("A6 requires p, q > 1");
            if (std::abs(1.0 / hp + 1.0 / hq - 1.0) > 1e-12) throw HypothesisError("A6 requires 1/p + 1/q = 1");
            rep.lhs = sup_norm(y);
            rep.rhs = std::pow(T + 1.0, 1.0 / hq) * std::pow(detail::power_sum(d, hp), 1.0 / hp);
            rep.holds = rep.lhs <= rep.rhs;
            break;
        }
        default:
            throw std::invalid_argument("check_norm_inequality: not a norm inequality id");
    }
    rep.sample_count = 1;
    return rep;
}

/// L = (1/p+) T^{(p+ - 2)/2} (T+1)^{-p+/2} - sum_k (phi2(k)/m + psi2(k)).
///
/// On the sphere ||y|| = 1/sqrt(T+1) every |y(k)| <= 1, so each
/// F(k, y+(k)) <= phi2(k)/m + psi2(k) and L bounds J from below there.
inline double sphere_energy_lower_bound(const ProblemSpec& problem) {
    const auto& env = problem.nonlinearity().envelope();
    if (!env) throw std::invalid_argument("sphere_energy_lower_bound: nonlinearity has no growth envelope");
    const double p_plus = problem.exponents().p_plus();
    const double kinetic = detail::c2_geometric_constant(problem.T(), p_plus) / p_plus;
    detail::CompensatedSum sum;
    for (int k = 1; k <= problem.T(); ++k) {
        sum.add(env->phi2(k) / env->m());
        sum.add(env->psi2(k));
    }
    return kinetic - sum.value();
}

}  // namespace pklap
