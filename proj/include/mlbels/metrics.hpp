#pragma once

#include <cstdint>

#include "mlbels/matrix.hpp"

namespace mlbels {

struct MicroCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    MicroCounts& operator+=(const MicroCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

/// Mean per-row Jaccard similarity. Rows with an empty union count as 1.
inline double example_accuracy(const BinaryMatrix& y, const BinaryMatrix& yhat) {
    require_shape(y.rows() == yhat.rows() && y.cols() == yhat.cols(), "example_accuracy");
    if (y.rows() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i) {
        std::size_t inter = 0, uni = 0;
        for (std::size_t j = 0; j < y.cols(); ++j) {
            const bool t = y(i, j) != 0, p = yhat(i, j) != 0;
            inter += (t && p);
            uni += (t || p);
        }
        sum += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
    }
    return sum / static_cast<double>(y.rows());
}

/// Mean per-row F1 = 2|Y ∧ Yhat| / (|Y| + |Yhat|). Rows where both sets are
/// empty count as 1.
inline double example_f1(const BinaryMatrix& y, const BinaryMatrix& yhat) {
    require_shape(y.rows() == yhat.rows() && y.cols() == yhat.cols(), "example_f1");
    if (y.rows() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i) {
        std::size_t inter = 0, truth = 0, pred = 0;
        for (std::size_t j = 0; j < y.cols(); ++j) {
            const bool t = y(i, j) != 0, p = yhat(i, j) != 0;
            inter += (t && p);
            truth += t;
            pred += p;
        }
        sum += (truth + pred) == 0 ? 1.0
                                   : 2.0 * static_cast<double>(inter) /
                                         static_cast<double>(truth + pred);
    }
    return sum / static_cast<double>(y.rows());
}

inline MicroCounts micro_counts(const BinaryMatrix& y, const BinaryMatrix& yhat) {
    require_shape(y.rows() == yhat.rows() && y.cols() == yhat.cols(), "micro_counts");
    MicroCounts c;
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j) {
            const bool t = y(i, j) != 0, p = yhat(i, j) != 0;
            c.tp += (t && p);
            c.fp += (!t && p);
            c.fn += (t && !p);
        }
    return c;
}

/// 2tp / (2tp + fp + fn); all-zero counts give 0.
inline double micro_f1(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

inline double micro_f1(const MicroCounts& c) { return micro_f1(c.tp, c.fp, c.fn); }

} // namespace mlbels
