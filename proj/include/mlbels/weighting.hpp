#pragma once

#include <vector>

#include "mlbels/labels.hpp"
#include "mlbels/matrix.hpp"
#include "mlbels/ridge.hpp"

namespace mlbels {

/// Row-wise min-max normalization. Rows whose values are all equal map to
/// zeros (a constant row carries no ranking signal).
inline Matrix minmax_rows(const Matrix& raw) {
    Matrix out(raw.rows(), raw.cols());
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        const double* r = raw.row_ptr(i);
        double lo = r[0], hi = r[0];
        for (std::size_t j = 1; j < raw.cols(); ++j) {
            if (r[j] < lo) lo = r[j];
            if (r[j] > hi) hi = r[j];
        }
        double* o = out.row_ptr(i);
        if (hi == lo) continue;  // leave zeros
        const double span = hi - lo;
        for (std::size_t j = 0; j < raw.cols(); ++j) o[j] = (r[j] - lo) / span;
    }
    return out;
}

/// Single-label classifier over all C labels at once; its normalized
/// predictions weight the binary-relevance outputs.
class WeightClassifier {
public:
    WeightClassifier() = default;
    WeightClassifier(std::size_t feature_dim, std::size_t n_labels, double lambda)
        : acc_(feature_dim, n_labels, lambda) {}

    void train(const Matrix& m, const Matrix& y01) {
        if (m.rows() == 0) return;
        accumulate(acc_, m, y01);
        weights_ = ridge_solve(acc_);
    }

    bool trained() const { return !weights_.empty(); }

    /// Normalized per-row scores in [0, 1]. Untrained: all zeros.
    Matrix predict(const Matrix& m) const {
        if (!trained()) return Matrix(m.rows(), acc_.targets());
        return minmax_rows(multiply(m, weights_));
    }

    /// Raw m * W scores without normalization.
    Matrix predict_raw(const Matrix& m) const {
        if (!trained()) return Matrix(m.rows(), acc_.targets());
        return multiply(m, weights_);
    }

    const RidgeAccumulator& accumulator() const { return acc_; }
    const Matrix& weights() const { return weights_; }

private:
    RidgeAccumulator acc_;
    Matrix weights_;
};

/// Running label cardinality: positives among observed entries / instances.
/// chunk_local = true replaces the running estimate with each chunk's own.
class CardinalityTracker {
public:
    explicit CardinalityTracker(bool chunk_local = false) : chunk_local_(chunk_local) {}

    void update(const LabelObservation& obs) {
        if (chunk_local_) {
            positives_seen_ = 0;
            instances_seen_ = 0;
        }
        for (std::size_t i = 0; i < obs.rows(); ++i)
            for (std::size_t j = 0; j < obs.cols(); ++j) positives_seen_ += obs(i, j) > 0;
        instances_seen_ += obs.rows();
    }

    double lc() const {
        return instances_seen_ == 0
                   ? 0.0
                   : static_cast<double>(positives_seen_) / static_cast<double>(instances_seen_);
    }

    std::uint64_t positives_seen() const { return positives_seen_; }
    std::uint64_t instances_seen() const { return instances_seen_; }

private:
    std::uint64_t positives_seen_ = 0;
    std::uint64_t instances_seen_ = 0;
    bool chunk_local_ = false;
};

inline bool should_weight(const CardinalityTracker& tracker, double tau) {
    return tracker.lc() >= tau;
}

/// Weight the per-label two-channel scores: negative channel by (1 - w),
/// positive channel by w, with w = p_w(row, label).
inline std::vector<Matrix> apply_weights(const std::vector<Matrix>& p_c, const Matrix& p_w) {
    require_shape(p_w.cols() == p_c.size(), "apply_weights: label count");
    std::vector<Matrix> out(p_c.size());
    for (std::size_t label = 0; label < p_c.size(); ++label) {
        const Matrix& scores = p_c[label];
        require_shape(scores.cols() == 2 && scores.rows() == p_w.rows(), "apply_weights: scores");
        Matrix weighted(scores.rows(), 2);
        for (std::size_t i = 0; i < scores.rows(); ++i) {
            const double w = p_w(i, label);
            weighted(i, 0) = scores(i, 0) * (1.0 - w);
            weighted(i, 1) = scores(i, 1) * w;
        }
        out[label] = std::move(weighted);
    }
    return out;
}

/// Final decision per (row, label): 1 iff the positive channel is at least
/// the negative one. Ties, including untrained all-zero scores, give 1.
inline BinaryMatrix decide(const std::vector<Matrix>& p_c) {
    if (p_c.empty()) return BinaryMatrix();
    const std::size_t n = p_c.front().rows();
    BinaryMatrix yhat(n, p_c.size());
    for (std::size_t label = 0; label < p_c.size(); ++label) {
        const Matrix& scores = p_c[label];
        require_shape(scores.rows() == n && scores.cols() == 2, "decide: scores");
        for (std::size_t i = 0; i < n; ++i) yhat(i, label) = scores(i, 1) >= scores(i, 0) ? 1 : 0;
    }
    return yhat;
}

} // namespace mlbels
