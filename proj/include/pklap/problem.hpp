#pragma once

// Problem data: the nonlinearity f(k, y), its (C.1)-type growth envelope,
// tolerances and the assembled ProblemSpec.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pklap/grid.hpp"
#include "pklap/quadrature.hpp"

namespace pklap {

struct ToleranceSet {
    double gradient = 1e-9;     // sup norm of grad_J
    double residual = 1e-10;    // sup norm of the difference-equation residual
    double quadrature = 1e-12;  // relative tolerance of the primitive F
    double positivity = 1e-12;  // margin for y(k) > 0
};

struct SolverOptions {
    int path_nodes = 64;
    int random_starts = 8;
    std::uint64_t seed = 0;
    int max_descent_iterations = 20000;
    int max_path_iterations = 20000;
    int max_newton_iterations = 100;
};

/// Two-sided power envelope
///   psi1(k) + phi1(k)|y|^{m-2}y <= f(k,y) <= phi2(k)|y|^{m-2}y + psi2(k),  y >= 0.
/// Sequences are indexed k = 1..T.
class GrowthEnvelope {
public:
    GrowthEnvelope(double m, std::vector<double> phi1, std::vector<double> phi2, std::vector<double> psi1,
                   std::vector<double> psi2)
        : m_(m), phi1_(std::move(phi1)), phi2_(std::move(phi2)), psi1_(std::move(psi1)), psi2_(std::move(psi2)) {
        if (!(m_ >= 2.0) || !std::isfinite(m_)) throw std::invalid_argument("GrowthEnvelope: m must be finite and >= 2");
        const std::size_t n = phi1_.size();
        if (n < 2 || phi2_.size() != n || psi1_.size() != n || psi2_.size() != n) {
            throw std::invalid_argument("GrowthEnvelope: phi1, phi2, psi1, psi2 must all have length T >= 2");
        }
        auto check = [](const std::vector<double>& s, const char* name) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (!(s[i] > 0.0) || !std::isfinite(s[i])) {
                    throw std::invalid_argument(std::string("GrowthEnvelope: ") + name + "(" + std::to_string(i + 1) +
                                                ") must be positive and finite");
                }
            }
        };
        check(phi1_, "phi1");
        check(phi2_, "phi2");
        check(psi1_, "psi1");
        check(psi2_, "psi2");
    }

    int T() const { return static_cast<int>(phi1_.size()); }
    double m() const { return m_; }
    double phi1(int k) const { return phi1_.at(static_cast<std::size_t>(k - 1)); }
    double phi2(int k) const { return phi2_.at(static_cast<std::size_t>(k - 1)); }
    double psi1(int k) const { return psi1_.at(static_cast<std::size_t>(k - 1)); }
    double psi2(int k) const { return psi2_.at(static_cast<std::size_t>(k - 1)); }

    /// Lower and upper envelope at (k, y), using |y|^{m-2}y for the power.
    double lower(int k, double y) const { return psi1(k) + phi1(k) * signed_power(y, m_ - 1.0); }
    double upper(int k, double y) const { return phi2(k) * signed_power(y, m_ - 1.0) + psi2(k); }

    GrowthEnvelope scaled(double s) const {
        auto mul = [s](std::vector<double> v) {
            for (auto& x : v) x *= s;
            return v;
        };
        return GrowthEnvelope(m_, mul(phi1_), mul(phi2_), mul(psi1_), mul(psi2_));
    }

    std::span<const double> phi1_values() const { return phi1_; }
    std::span<const double> phi2_values() const { return phi2_; }
    std::span<const double> psi1_values() const { return psi1_; }
    std::span<const double> psi2_values() const { return psi2_; }

    /// |y|^{e-1} y written as |y|^{(e-1)-1} y to match the envelope form.
    static double signed_power(double y, double e) {
        return std::pow(std::abs(y), e - 1.0) * y;
    }

private:
    double m_;
    std::vector<double> phi1_, phi2_, psi1_, psi2_;
};

/// f(k, y) with optional closed-form primitive and growth envelope.
class Nonlinearity {
public:
    using Evaluator = std::function<double(int, double)>;

    Nonlinearity(std::string name, Evaluator f, std::optional<GrowthEnvelope> envelope = std::nullopt,
                 Evaluator primitive = {})
        : name_(std::move(name)),
          f_(std::move(f)),
          primitive_(std::move(primitive)),
          envelope_(std::move(envelope)),
          cache_(std::make_shared<PrimitiveCache>()) {
        if (!f_) throw std::invalid_argument("Nonlinearity: empty evaluator");
    }

    double operator()(int k, double y) const { return f_(k, y); }
    const std::string& name() const { return name_; }
    bool has_closed_form() const { return static_cast<bool>(primitive_); }
    const Evaluator& closed_form() const { return primitive_; }
    const std::optional<GrowthEnvelope>& envelope() const { return envelope_; }
    PrimitiveCache& cache() const { return *cache_; }

private:
    std::string name_;
    Evaluator f_;
    Evaluator primitive_;
    std::optional<GrowthEnvelope> envelope_;
    std::shared_ptr<PrimitiveCache> cache_;
};

namespace families {

/// scale * [ |y|^{m-2}y (2 + arctan y)/(T^2 k) + (sin^2(k) e^{-|y|} + 1)/T^3 ]
/// with envelope phi1 = 2/(T^2 k), phi2 = (4+pi)/(2 T^2 k), psi1 = 1/T^3,
/// psi2 = 2/T^3, all multiplied by scale.
inline Nonlinearity example1(int T, double m, double scale = 1.0) {
    if (T < 2) throw std::invalid_argument("example1: T must be >= 2");
    if (!(scale > 0.0)) throw std::invalid_argument("example1: scale must be positive");
    const double T2 = static_cast<double>(T) * T;
    const double T3 = T2 * T;
    auto f = [=](int k, double y) {
        const double s = std::sin(static_cast<double>(k));
        return scale * (GrowthEnvelope::signed_power(y, m - 1.0) * (2.0 + std::atan(y)) / (T2 * k) +
                        (s * s * std::exp(-std::abs(y)) + 1.0) / T3);
    };
    std::vector<double> phi1(T), phi2(T), psi1(T), psi2(T);
    for (int k = 1; k <= T; ++k) {
        phi1[k - 1] = scale * 2.0 / (T2 * k);
        phi2[k - 1] = scale * (4.0 + std::numbers::pi) / (2.0 * T2 * k);
        psi1[k - 1] = scale * 1.0 / T3;
        psi2[k - 1] = scale * 2.0 / T3;
    }
    return Nonlinearity("example1", f, GrowthEnvelope(m, phi1, phi2, psi1, psi2));
}

/// a(k)|y|^{m-2}y + b(k); the envelope is exact (phi = a, psi = b).
inline Nonlinearity power(std::vector<double> a, std::vector<double> b, double m) {
    if (a.size() != b.size()) throw std::invalid_argument("power: a and b must have equal length");
    auto f = [a, b, m](int k, double y) {
        return a[static_cast<std::size_t>(k - 1)] * GrowthEnvelope::signed_power(y, m - 1.0) +
               b[static_cast<std::size_t>(k - 1)];
    };
    auto F = [a, b, m](int k, double y) {
        return a[static_cast<std::size_t>(k - 1)] * std::pow(std::abs(y), m) / m + b[static_cast<std::size_t>(k - 1)] * y;
    };
    return Nonlinearity("power", f, GrowthEnvelope(m, a, a, b, b), F);
}

/// f(k, y) = c. No (C.1) envelope exists for a constant.
inline Nonlinearity constant(double c) {
    return Nonlinearity("constant", [c](int, double) { return c; }, std::nullopt,
                        [c](int, double y) { return c * y; });
}

}  // namespace families

/// T, p(.), f and solver settings; validated on construction.
class ProblemSpec {
public:
    ProblemSpec(int T, ExponentMap exponents, Nonlinearity nonlinearity, ToleranceSet tolerances = {},
                SolverOptions options = {})
        : T_(T),
          exponents_(std::move(exponents)),
          nonlinearity_(std::move(nonlinearity)),
          tolerances_(tolerances),
          options_(options) {
        if (T_ < 2) throw std::invalid_argument("ProblemSpec: T must be >= 2");
        if (exponents_.T() != T_) {
            throw std::invalid_argument("ProblemSpec: exponent map has " + std::to_string(exponents_.T() + 2) +
                                        " entries, expected T+2 = " + std::to_string(T_ + 2));
        }
        if (const auto& env = nonlinearity_.envelope()) {
            if (env->T() != T_) throw std::invalid_argument("ProblemSpec: envelope length differs from T");
            if (!(env->m() > exponents_.p_plus())) {
                throw std::invalid_argument("ProblemSpec: growth exponent m = " + std::to_string(env->m()) +
                                            " must exceed p+ = " + std::to_string(exponents_.p_plus()));
            }
        }
        if (options_.path_nodes < 3) throw std::invalid_argument("ProblemSpec: path_nodes must be >= 3");
    }

    int T() const { return T_; }
    const ExponentMap& exponents() const { return exponents_; }
    const Nonlinearity& nonlinearity() const { return nonlinearity_; }
    const ToleranceSet& tolerances() const { return tolerances_; }
    const SolverOptions& options() const { return options_; }
    double f(int k, double y) const { return nonlinearity_(k, y); }

    ProblemSpec with_tolerances(ToleranceSet t) const {
        ProblemSpec copy = *this;
        copy.tolerances_ = t;
        return copy;
    }
    ProblemSpec with_options(SolverOptions o) const {
        ProblemSpec copy = *this;
        copy.options_ = o;
        return copy;
    }

private:
    int T_;
    ExponentMap exponents_;
    Nonlinearity nonlinearity_;
    ToleranceSet tolerances_;
    SolverOptions options_;
};

}  // namespace pklap
