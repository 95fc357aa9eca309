#pragma once

// Grid functions on [0, T+1] with homogeneous Dirichlet ends, the forward
// difference, positive/negative parts and the norms of the space Y.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pklap {

/// Real values y(0), ..., y(T+1) with y(0) = y(T+1) = 0.
///
/// Indices follow the mathematical convention: `y(k)` for k in [0, T+1].
/// Storage is the full T+2 vector; the boundary entries are always zero.
class GridFunction {
public:
    /// Zero function on [0, T+1].
    static GridFunction zeros(int T) {
        check_size(T);
        return GridFunction(T, std::vector<double>(static_cast<std::size_t>(T) + 2, 0.0));
    }

    /// Pads the T interior values y(1..T) with the two boundary zeros.
    static GridFunction from_interior(std::span<const double> interior) {
        const int T = static_cast<int>(interior.size());
        check_size(T);
        std::vector<double> v(interior.size() + 2, 0.0);
        std::copy(interior.begin(), interior.end(), v.begin() + 1);
        return GridFunction(T, std::move(v));
    }

    /// Takes all T+2 values; the boundary entries must already be zero.
    static GridFunction from_full(std::span<const double> values) {
        if (values.size() < 4) {
            throw std::invalid_argument("GridFunction: need T+2 >= 4 values");
        }
        if (values.front() != 0.0 || values.back() != 0.0) {
            throw std::invalid_argument("GridFunction: boundary values y(0), y(T+1) must be 0");
        }
        return GridFunction(static_cast<int>(values.size()) - 2,
                            std::vector<double>(values.begin(), values.end()));
    }

    int T() const { return T_; }

    double operator()(int k) const { return values_.at(static_cast<std::size_t>(k)); }

    std::span<const double> values() const { return values_; }
    std::span<const double> interior() const {
        return std::span<const double>(values_).subspan(1, static_cast<std::size_t>(T_));
    }

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    GridFunction(int T, std::vector<double> v) : T_(T), values_(std::move(v)) {}

    static void check_size(int T) {
        if (T < 2) throw std::invalid_argument("GridFunction: T must be >= 2, got " + std::to_string(T));
    }

    int T_;
    std::vector<double> values_;
};

/// Variable exponent p(k), k in [0, T+1], with cached extremes.
class ExponentMap {
public:
    explicit ExponentMap(std::vector<double> exponents) : p_(std::move(exponents)) {
        if (p_.size() < 4) throw std::invalid_argument("ExponentMap: need T+2 >= 4 exponents");
        for (std::size_t k = 0; k < p_.size(); ++k) {
            if (!std::isfinite(p_[k])) {
                throw std::invalid_argument("ExponentMap: p(" + std::to_string(k) + ") is not finite");
            }
            if (p_[k] < 2.0) {
                throw std::invalid_argument("ExponentMap: exponent below 2 at p(" + std::to_string(k) +
                                            ") = " + std::to_string(p_[k]));
            }
        }
        p_minus_ = *std::min_element(p_.begin(), p_.end());
        p_plus_ = *std::max_element(p_.begin(), p_.end());
    }

    static ExponentMap constant(int T, double p) {
        return ExponentMap(std::vector<double>(static_cast<std::size_t>(T) + 2, p));
    }

    /// p(k) = pattern[k mod pattern.size()].
    static ExponentMap periodic(int T, std::span<const double> pattern) {
        if (pattern.empty()) throw std::invalid_argument("ExponentMap: empty periodic pattern");
        std::vector<double> v(static_cast<std::size_t>(T) + 2);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = pattern[k % pattern.size()];
        return ExponentMap(std::move(v));
    }

    int T() const { return static_cast<int>(p_.size()) - 2; }
    double operator()(int k) const { return p_.at(static_cast<std::size_t>(k)); }
    double p_minus() const { return p_minus_; }
    double p_plus() const { return p_plus_; }
    std::span<const double> values() const { return p_; }

private:
    std::vector<double> p_;
    double p_minus_ = 2.0;
    double p_plus_ = 2.0;
};

/// d[k-1] = y(k) - y(k-1), k = 1..T+1.
inline std::vector<double> forward_difference(const GridFunction& y) {
    const auto v = y.values();
    std::vector<double> d(v.size() - 1);
    for (std::size_t j = 0; j + 1 < v.size(); ++j) d[j] = v[j + 1] - v[j];
    return d;
}

inline GridFunction positive_part(const GridFunction& y) {
    std::vector<double> v(y.values().begin(), y.values().end());
    for (auto& x : v) x = std::max(x, 0.0);
    return GridFunction::from_full(v);
}

inline GridFunction negative_part(const GridFunction& y) {
    std::vector<double> v(y.values().begin(), y.values().end());
    for (auto& x : v) x = std::max(-x, 0.0);
    return GridFunction::from_full(v);
}

/// Sum of squared forward differences, summed left to right.
inline double h_norm_squared(const GridFunction& y) {
    const auto v = y.values();
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        const double d = v[j + 1] - v[j];
        s += d * d;
    }
    return s;
}

/// ||y|| = (sum_{k=1}^{T+1} |y(k) - y(k-1)|^2)^{1/2}
inline double h_norm(const GridFunction& y) { return std::sqrt(h_norm_squared(y)); }

/// max_{k in [1,T]} |y(k)|
inline double sup_norm(const GridFunction& y) {
    double m = 0.0;
    for (double x : y.interior()) m = std::max(m, std::abs(x));
    return m;
}

/// y(k) = lambda on [1,T], zero at both ends.
inline GridFunction constant_profile(int T, double lambda) {
    if (T < 2) throw std::invalid_argument("constant_profile: T must be >= 2");
    std::vector<double> v(static_cast<std::size_t>(T), lambda);
    return GridFunction::from_interior(v);
}

}  // namespace pklap
