#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mlbels/matrix.hpp"
#include "mlbels/rng.hpp"

namespace mlbels {

/// n x C label matrix over {-1, 0, +1}: negative, missing, positive.
class LabelObservation {
public:
    LabelObservation() = default;
    LabelObservation(std::size_t rows, std::size_t cols, std::int8_t fill = -1)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::int8_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void set(std::size_t i, std::size_t j, std::int8_t v) {
        if (v != -1 && v != 0 && v != 1) throw std::invalid_argument("label value must be -1, 0 or +1");
        data_[i * cols_ + j] = v;
    }

    friend bool operator==(const LabelObservation& a, const LabelObservation& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int8_t> data_;
};

/// Rows of one label column that are actually observed, with their {0,1}
/// targets. Binary-relevance components train on exactly this subset.
struct MaskedColumn {
    std::vector<std::size_t> row_index;
    std::vector<double> target;  // 0 or 1, aligned with row_index

    std::size_t size() const { return row_index.size(); }
    bool empty() const { return row_index.empty(); }
};

inline MaskedColumn mask_for_br(const LabelObservation& obs, std::size_t label_index) {
    if (label_index >= obs.cols()) throw std::invalid_argument("mask_for_br: label index out of range");
    MaskedColumn col;
    for (std::size_t i = 0; i < obs.rows(); ++i) {
        const std::int8_t v = obs(i, label_index);
        if (v == 0) continue;
        col.row_index.push_back(i);
        col.target.push_back(v > 0 ? 1.0 : 0.0);
    }
    return col;
}

/// Full {0,1} matrix for the weight classifier: missing entries imputed as
/// negative.
inline Matrix impute_for_weights(const LabelObservation& obs) {
    Matrix y(obs.rows(), obs.cols());
    for (std::size_t i = 0; i < obs.rows(); ++i)
        for (std::size_t j = 0; j < obs.cols(); ++j) y(i, j) = obs(i, j) > 0 ? 1.0 : 0.0;
    return y;
}

/// Each entry kept with probability keep_fraction, otherwise set to missing.
/// keep_fraction = 1 returns the input untouched (no randomness consumed).
inline LabelObservation drop_labels(const LabelObservation& obs, double keep_fraction,
                                    std::uint64_t seed) {
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0)
        throw std::invalid_argument("drop_labels: keep_fraction must be in (0, 1]");
    if (keep_fraction == 1.0) return obs;

    LabelObservation out = obs;
    UniformSource rng(seed);
    for (std::size_t i = 0; i < obs.rows(); ++i)
        for (std::size_t j = 0; j < obs.cols(); ++j)
            if (rng.unit() >= keep_fraction) out.set(i, j, 0);
    return out;
}

/// Ground-truth positives as a binary matrix (+1 -> 1, everything else 0).
inline BinaryMatrix positives_of(const LabelObservation& obs) {
    BinaryMatrix y(obs.rows(), obs.cols());
    for (std::size_t i = 0; i < obs.rows(); ++i)
        for (std::size_t j = 0; j < obs.cols(); ++j) y(i, j) = obs(i, j) > 0 ? 1 : 0;
    return y;
}

} // namespace mlbels
