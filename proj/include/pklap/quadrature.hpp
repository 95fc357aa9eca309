#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace pklap {

/// Raised when adaptive quadrature cannot meet its tolerance within the
/// recursion budget. Carries the error estimate it did reach.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_tolerance() const { return achieved_; }

private:
    double achieved_;
};

namespace detail {

struct SimpsonState {
    const std::function<double(double)>* f;
    double tol;       // absolute target for the whole interval
    double err = 0.0; // accumulated error estimate
    bool failed = false;
    int max_depth;
};

inline double simpson_recurse(SimpsonState& st, double a, double fa, double b, double fb, double m,
                              double fm, double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) {
        st.err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    if (depth >= st.max_depth || !(m - a > 0.0) || !(b - m > 0.0)) {
        st.failed = true;
        st.err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_recurse(st, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1) +
           simpson_recurse(st, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson rule with Richardson correction on [a, b].
///
/// The tolerance is relative to max(1, |coarse estimate|). The interval is
/// pre-split into 8 panels so short features near an endpoint are resolved.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol,
                               int max_depth = 48) {
    if (a == b) return 0.0;
    if (b < a) return -adaptive_simpson(f, b, a, rel_tol, max_depth);

    constexpr int panels = 8;
    const double h = (b - a) / panels;
    double nodes[2 * panels + 1];
    double fv[2 * panels + 1];
    for (int i = 0; i <= 2 * panels; ++i) {
        nodes[i] = (i == 2 * panels) ? b : a + 0.5 * h * i;
        fv[i] = f(nodes[i]);
    }
    double coarse = 0.0;
    for (int p = 0; p < panels; ++p) {
        coarse += (nodes[2 * p + 2] - nodes[2 * p]) / 6.0 * (fv[2 * p] + 4.0 * fv[2 * p + 1] + fv[2 * p + 2]);
    }
    const double abs_tol = rel_tol * std::max(1.0, std::abs(coarse));

    detail::SimpsonState st{&f, abs_tol, 0.0, false, max_depth};
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = nodes[2 * p], pm = nodes[2 * p + 1], pb = nodes[2 * p + 2];
        const double whole = (pb - pa) / 6.0 * (fv[2 * p] + 4.0 * fv[2 * p + 1] + fv[2 * p + 2]);
        total += detail::simpson_recurse(st, pa, fv[2 * p], pb, fv[2 * p + 2], pm, fv[2 * p + 1], whole,
                                         abs_tol / panels, 0);
    }
    if (st.failed || !std::isfinite(total)) {
        throw QuadratureError("adaptive_simpson: tolerance " + std::to_string(abs_tol) +
                                  " not reached on [" + std::to_string(a) + ", " + std::to_string(b) +
                                  "], estimate " + std::to_string(st.err),
                              st.err);
    }
    return total;
}

/// Thread-safe memo of primitive values keyed on (k, exact bits of y).
/// Cached values are bitwise what a fresh evaluation would return, so
/// serial and concurrent callers observe identical results.
class PrimitiveCache {
public:
    explicit PrimitiveCache(std::size_t capacity = 1u << 20) : capacity_(capacity) {}

    template <class Compute>
    double get_or_compute(int k, double y, Compute&& compute) {
        const Key key{k, bits(y)};
        {
            std::lock_guard lock(mutex_);
            if (auto it = map_.find(key); it != map_.end()) return it->second;
        }
        const double value = compute();
        std::lock_guard lock(mutex_);
        if (map_.size() >= capacity_) map_.clear();
        map_.emplace(key, value);
        return value;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return map_.size();
    }

private:
    struct Key {
        int k;
        std::uint64_t y;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& key) const noexcept {
            std::uint64_t h = key.y ^ (static_cast<std::uint64_t>(key.k) * 0x9E3779B97F4A7C15ull);
            h ^= h >> 33;
            h *= 0xff51afd7ed558ccdull;
            h ^= h >> 33;
            return static_cast<std::size_t>(h);
        }
    };
    static std::uint64_t bits(double y) {
        std::uint64_t u;
        std::memcpy(&u, &y, sizeof u);
        return u;
    }

    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::unordered_map<Key, double, KeyHash> map_;
};

}  // namespace pklap
