#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlbels {

/// Dense row-major matrix of doubles. Plain value type: copyable, movable,
/// safe to share read-only across threads.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Binary n x C matrix (predictions, ground-truth positives). uint8 storage so
/// equality is exact for determinism checks.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols, std::uint8_t fill = 0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint8_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    std::uint8_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend bool operator==(const BinaryMatrix& a, const BinaryMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const BinaryMatrix& a, const BinaryMatrix& b) { return !(a == b); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> data_;
};

inline void require_shape(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("shape mismatch: " + what);
}

/// c = a * b
inline Matrix multiply(const Matrix& a, const Matrix& b) {
    require_shape(a.cols() == b.rows(), "multiply " + std::to_string(a.cols()) + " vs " +
                                            std::to_string(b.rows()));
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row_ptr(i);
        double* ci = c.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = ai[k];
            if (aik == 0.0) continue;
            const double* bk = b.row_ptr(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

/// gram += m^T m. Fills both triangles; row order of m is the summation order.
inline void add_gram(Matrix& gram, const Matrix& m) {
    require_shape(gram.rows() == m.cols() && gram.cols() == m.cols(), "add_gram");
    const std::size_t k = m.cols();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* row = m.row_ptr(r);
        for (std::size_t i = 0; i < k; ++i) {
            const double ri = row[i];
            if (ri == 0.0) continue;
            double* gi = gram.row_ptr(i);
            for (std::size_t j = i; j < k; ++j) gi[j] += ri * row[j];
        }
    }
    // mirror the upper triangle so gram stays exactly symmetric
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) gram(j, i) = gram(i, j);
}

/// cross += m^T y
inline void add_cross(Matrix& cross, const Matrix& m, const Matrix& y) {
    require_shape(m.rows() == y.rows(), "add_cross rows");
    require_shape(cross.rows() == m.cols() && cross.cols() == y.cols(), "add_cross shape");
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* mr = m.row_ptr(r);
        const double* yr = y.row_ptr(r);
        for (std::size_t i = 0; i < m.cols(); ++i) {
            const double mi = mr[i];
            if (mi == 0.0) continue;
            double* ci = cross.row_ptr(i);
            for (std::size_t j = 0; j < y.cols(); ++j) ci[j] += mi * yr[j];
        }
    }
}

} // namespace mlbels
