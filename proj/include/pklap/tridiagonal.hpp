#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace pklap {

/// Tridiagonal matrix: sub[i] = A(i+1, i), diag[i] = A(i, i), super[i] = A(i, i+1).
struct Tridiagonal {
    std::vector<double> sub, diag, super;

    explicit Tridiagonal(std::size_t n) : sub(n ? n - 1 : 0, 0.0), diag(n, 0.0), super(n ? n - 1 : 0, 0.0) {}
    std::size_t size() const { return diag.size(); }

    std::vector<double> multiply(const std::vector<double>& x) const {
        const std::size_t n = size();
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += sub[i - 1] * x[i - 1];
            if (i + 1 < n) s += super[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }
};

/// Gaussian elimination with partial pivoting (LAPACK dgtsv scheme).
/// Returns nullopt when a pivot is exactly zero.
inline std::optional<std::vector<double>> solve_tridiagonal(Tridiagonal A, std::vector<double> b) {
    const std::size_t n = A.size();
    if (n == 0) return b;
    std::vector<double> dl = A.sub, d = A.diag, du = A.super;
    std::vector<double> du2(n > 2 ? n - 2 : 0, 0.0);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) return std::nullopt;
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            // swap rows i and i+1
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - fact * b[i + 1];
            if (i + 2 < n) du2[i] = dl[i];
        }
    }
    if (d[n - 1] == 0.0) return std::nullopt;

    // back substitution; dl[i] holds the second superdiagonal after a swap
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n >= 2 ? n - 2 : 0; ii-- > 0;) {
        const double second = (ii + 2 < n) ? du2[ii] : 0.0;
        b[ii] = (b[ii] - du[ii] * b[ii + 1] - second * b[ii + 2]) / d[ii];
    }
    return b;
}

/// The Dirichlet difference matrix tridiag(-1, 2, -1) of size T, i.e. the
/// Gram matrix of the Y inner product on interior values.
inline Tridiagonal dirichlet_laplacian(std::size_t T) {
    Tridiagonal A(T);
    for (std::size_t i = 0; i < T; ++i) A.diag[i] = 2.0;
    for (std::size_t i = 0; i + 1 < T; ++i) A.sub[i] = A.super[i] = -1.0;
    return A;
}

}  // namespace pklap
