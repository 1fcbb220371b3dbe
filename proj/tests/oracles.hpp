#pragma once

// Test-only reference implementations, deliberately naive and independent of
// the library's solve path.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<double>>;

inline Grid zeros(std::size_t r, std::size_t c) { return Grid(r, std::vector<double>(c, 0.0)); }

inline Grid matmul(const Grid& a, const Grid& b) {
    Grid c = zeros(a.size(), b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b[0].size(); ++j)
            for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Grid transpose(const Grid& a) {
    Grid t = zeros(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

/// Gauss-Jordan with partial pivoting.
inline Grid invert(Grid a) {
    const std::size_t n = a.size();
    Grid inv = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) throw std::runtime_error("oracle: singular matrix");
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);

        const double d = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            const double f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

/// W = (lambda I + M^T M)^{-1} M^T Y by explicit inversion.
inline Grid ridge_fit(const Grid& m, const Grid& y, double lambda) {
    Grid mt = transpose(m);
    Grid gram = matmul(mt, m);
    for (std::size_t i = 0; i < gram.size(); ++i) gram[i][i] += lambda;
    return matmul(invert(gram), matmul(mt, y));
}

} // namespace oracle
