#pragma once

#include <cmath>
#include <stdexcept>

#include "mlbels/matrix.hpp"

namespace mlbels {

/// Sufficient statistics of a regularized least-squares fit, accumulated
/// chunk by chunk: gram = sum of M^T M, cross = sum of M^T Y. Solving at any
/// point equals the batch fit on everything accumulated so far.
struct RidgeAccumulator {
    Matrix gram;   // k x k, kept exactly symmetric
    Matrix cross;  // k x t
    double lambda = 1e-3;
    std::size_t samples_seen = 0;

    RidgeAccumulator() = default;
    RidgeAccumulator(std::size_t k, std::size_t targets, double lambda_)
        : gram(k, k), cross(k, targets), lambda(lambda_) {
        if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    }

    std::size_t dim() const { return gram.rows(); }
    std::size_t targets() const { return cross.cols(); }
};

inline void accumulate(RidgeAccumulator& acc, const Matrix& m, const Matrix& y) {
    require_shape(m.cols() == acc.dim(), "accumulate: feature width");
    require_shape(y.rows() == m.rows(), "accumulate: row counts");
    require_shape(y.cols() == acc.targets(), "accumulate: target width");
    add_gram(acc.gram, m);
    add_cross(acc.cross, m, y);
    acc.samples_seen += m.rows();
}

namespace detail {

/// In-place Cholesky of an SPD matrix (lower triangle). Returns false on a
/// non-positive pivot instead of throwing; caller decides on jitter/failure.
inline bool cholesky(Matrix& a) {
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / ljj;
        }
    }
    return true;
}

/// Solve L L^T w = b for every column of b, given the Cholesky factor L.
inline Matrix cholesky_solve(const Matrix& l, const Matrix& b) {
    const std::size_t n = l.rows();
    Matrix w = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        // forward: L z = b
        for (std::size_t i = 0; i < n; ++i) {
            double s = w(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * w(k, c);
            w(i, c) = s / l(i, i);
        }
        // backward: L^T w = z
        for (std::size_t ii = n; ii-- > 0;) {
            double s = w(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * w(k, c);
            w(ii, c) = s / l(ii, ii);
        }
    }
    return w;
}

} // namespace detail

/// Solve (lambda I + gram) W = cross via Cholesky. One jitter retry
/// (1e-8 * trace / k added to the diagonal) before reporting failure.
inline Matrix ridge_solve(const RidgeAccumulator& acc) {
    const std::size_t k = acc.dim();
    if (k == 0) throw std::invalid_argument("ridge_solve on empty accumulator");

    Matrix system = acc.gram;
    for (std::size_t i = 0; i < k; ++i) system(i, i) += acc.lambda;

    Matrix factor = system;
    if (!detail::cholesky(factor)) {
        // unregularized singular systems are the caller's error; with
        // lambda > 0 a rank-deficient early chunk gets one jitter retry
        if (acc.lambda == 0.0)
            throw std::runtime_error("ridge_solve: singular system with lambda = 0");
        double trace = 0.0;
        for (std::size_t i = 0; i < k; ++i) trace += system(i, i);
        const double jitter = 1e-8 * trace / static_cast<double>(k);
        factor = system;
        for (std::size_t i = 0; i < k; ++i) factor(i, i) += jitter;
        if (!detail::cholesky(factor))
            throw std::runtime_error("ridge_solve: system is singular (lambda too small)");
    }

    Matrix w = detail::cholesky_solve(factor, acc.cross);
    if (!w.all_finite()) throw std::runtime_error("ridge_solve: non-finite solution");
    return w;
}

} // namespace mlbels
