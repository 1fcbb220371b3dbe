#include "doctest.h"

#include <cmath>

#include "mlbels/matrix.hpp"
#include "mlbels/ridge.hpp"
#include "mlbels/rng.hpp"

#include "oracles.hpp"

using namespace mlbels;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, UniformSource& rng) {
    Matrix m(r, c);
    for (double& v : m.data()) v = rng.symmetric();
    return m;
}

oracle::Grid to_grid(const Matrix& m) {
    oracle::Grid g = oracle::zeros(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
    return g;
}

double max_abs_diff(const Matrix& m, const oracle::Grid& g) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            worst = std::max(worst, std::abs(m(i, j) - g[i][j]));
    return worst;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, j) = b(i, j);
    return out;
}

} // namespace

TEST_CASE("accumulate identity chunks") {
    RidgeAccumulator acc(2, 2, 0.0);
    accumulate(acc, Matrix::identity(2), Matrix::identity(2));
    CHECK(acc.gram == Matrix::identity(2));
    CHECK(acc.cross == Matrix::identity(2));

    // same chunk again doubles the statistics
    accumulate(acc, Matrix::identity(2), Matrix::identity(2));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(acc.gram(i, j) == (i == j ? 2.0 : 0.0));
}

TEST_CASE("accumulate rejects mismatched shapes") {
    RidgeAccumulator acc(3, 2, 1.0);
    CHECK_THROWS_AS(accumulate(acc, Matrix(4, 2), Matrix(4, 2)), std::invalid_argument);
    CHECK_THROWS_AS(accumulate(acc, Matrix(4, 3), Matrix(5, 2)), std::invalid_argument);
}

TEST_CASE("chunked accumulation equals the stacked fit") {
    UniformSource rng(11);
    const Matrix m1 = random_matrix(7, 5, rng);
    const Matrix m2 = random_matrix(9, 5, rng);
    const Matrix y1 = random_matrix(7, 3, rng);
    const Matrix y2 = random_matrix(9, 3, rng);

    RidgeAccumulator chunked(5, 3, 1e-3);
    accumulate(chunked, m1, y1);
    accumulate(chunked, m2, y2);

    RidgeAccumulator stacked(5, 3, 1e-3);
    accumulate(stacked, vstack(m1, m2), vstack(y1, y2));

    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(chunked.gram(i, j) == doctest::Approx(stacked.gram(i, j)).epsilon(1e-10));
    const Matrix w1 = ridge_solve(chunked);
    const Matrix w2 = ridge_solve(stacked);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(w1(i, j) - w2(i, j)) < 1e-10);
}

TEST_CASE("ridge_solve identity cases") {
    RidgeAccumulator acc(2, 2, 0.0);
    accumulate(acc, Matrix::identity(2), Matrix::identity(2));
    Matrix w = ridge_solve(acc);
    CHECK(std::abs(w(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(w(1, 1) - 1.0) < 1e-12);
    CHECK(std::abs(w(0, 1)) < 1e-12);

    acc.lambda = 1.0;  // (I + I)^{-1} I = 0.5 I
    w = ridge_solve(acc);
    CHECK(std::abs(w(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(w(1, 1) - 0.5) < 1e-12);
}

TEST_CASE("ridge_solve matches the explicit-inverse oracle") {
    UniformSource rng(42);
    const Matrix m = random_matrix(8, 4, rng);
    const Matrix y = random_matrix(8, 2, rng);

    RidgeAccumulator acc(4, 2, 1e-3);
    accumulate(acc, m, y);
    const Matrix w = ridge_solve(acc);

    const oracle::Grid expected = oracle::ridge_fit(to_grid(m), to_grid(y), 1e-3);
    CHECK(max_abs_diff(w, expected) < 1e-10);
}

TEST_CASE("ridge_solve reports singular systems at lambda zero") {
    RidgeAccumulator acc(3, 1, 0.0);
    Matrix m(2, 3);  // rank deficient: only two rows
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    Matrix y(2, 1, 1.0);
    accumulate(acc, m, y);
    CHECK_THROWS_AS(ridge_solve(acc), std::runtime_error);
}

TEST_CASE("rank-deficient systems solve once lambda is positive") {
    UniformSource rng(3);
    Matrix m = random_matrix(2, 6, rng);  // 6-dim gram from 2 rows
    Matrix y = random_matrix(2, 2, rng);
    RidgeAccumulator acc(6, 2, 1e-3);
    accumulate(acc, m, y);
    const Matrix w = ridge_solve(acc);
    CHECK(w.all_finite());
}

TEST_CASE("residual bound and symmetry hold on random accumulators") {
    UniformSource rng(1234);
    for (int round = 0; round < 25; ++round) {
        const std::size_t k = 2 + rng.below(12);
        const std::size_t t = 1 + rng.below(4);
        RidgeAccumulator acc(k, t, 1e-3 + rng.unit());
        const std::size_t chunks = 1 + rng.below(4);
        for (std::size_t c = 0; c < chunks; ++c) {
            const std::size_t n = 1 + rng.below(20);
            accumulate(acc, random_matrix(n, k, rng), random_matrix(n, t, rng));
        }

        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) CHECK(acc.gram(i, j) == acc.gram(j, i));

        const Matrix w = ridge_solve(acc);
        REQUIRE(w.all_finite());

        // residual ||(lambda I + gram) W - cross|| <= 1e-8 (1 + ||cross||)
        double resid = 0.0, cross_norm = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < t; ++j) {
                double s = acc.lambda * w(i, j);
                for (std::size_t l = 0; l < k; ++l) s += acc.gram(i, l) * w(l, j);
                resid += (s - acc.cross(i, j)) * (s - acc.cross(i, j));
                cross_norm += acc.cross(i, j) * acc.cross(i, j);
            }
        CHECK(std::sqrt(resid) <= 1e-8 * (1.0 + std::sqrt(cross_norm)));
    }
}

TEST_CASE("matrix multiply basics") {
    Matrix a(2, 3);
    a(0, 0) = 1.0;
    a(0, 2) = 2.0;
    a(1, 1) = -1.0;
    Matrix b(3, 2);
    b(0, 0) = 3.0;
    b(2, 1) = 4.0;
    b(1, 0) = 5.0;
    const Matrix c = multiply(a, b);
    CHECK(c(0, 0) == 3.0);
    CHECK(c(0, 1) == 8.0);
    CHECK(c(1, 0) == -5.0);
    CHECK(c(1, 1) == 0.0);
    CHECK_THROWS_AS(multiply(a, Matrix(2, 2)), std::invalid_argument);
}
