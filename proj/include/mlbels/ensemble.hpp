#pragma once

#include <deque>
#include <stdexcept>
#include <vector>

#include "mlbels/labels.hpp"
#include "mlbels/matrix.hpp"
#include "mlbels/ridge.hpp"

namespace mlbels {

enum class InstanceState { Active, Removed, New, EligibleForRetrieval };

/// One ridge-regression head over the mapped representation. Targets are the
/// two one-hot channels [negative, positive] of a single label.
struct OutputLayerInstance {
    RidgeAccumulator acc;
    Matrix weights;              // empty until first solve
    double last_accuracy = 1.0;  // set by scoring before it is ever consulted
    std::size_t age = 0;         // chunks trained on
    InstanceState state = InstanceState::New;

    OutputLayerInstance() = default;
    OutputLayerInstance(std::size_t feature_dim, double lambda)
        : acc(feature_dim, 2, lambda) {}

    bool trained() const { return !weights.empty(); }

    /// n x 2 scores; untrained instances contribute zeros.
    Matrix predict(const Matrix& m) const {
        if (!trained()) return Matrix(m.rows(), 2);
        return multiply(m, weights);
    }
};

enum class LifecycleKind { Removed, RetrievedFromPool, CreatedNew, EvictedFromPool };

struct LifecycleEvent {
    std::size_t chunk = 0;
    std::size_t label = 0;
    std::size_t slot = 0;
    LifecycleKind kind = LifecycleKind::Removed;

    friend bool operator==(const LifecycleEvent&, const LifecycleEvent&) = default;
};

/// Per-label ensemble: a fixed number of active instances plus a bounded
/// FIFO pool of removed ones that may return when their accuracy recovers.
class BRComponent {
public:
    BRComponent() = default;
    BRComponent(std::size_t label_index, std::size_t ensemble_size, std::size_t pool_capacity,
                std::size_t feature_dim, double lambda)
        : label_index_(label_index),
          ensemble_size_(ensemble_size),
          pool_capacity_(pool_capacity),
          feature_dim_(feature_dim),
          lambda_(lambda) {
        if (ensemble_size == 0) throw std::invalid_argument("ensemble size must be >= 1");
        active_.reserve(ensemble_size);
        for (std::size_t i = 0; i < ensemble_size; ++i) {
            active_.emplace_back(feature_dim, lambda);
            active_.back().state = InstanceState::Active;
        }
    }

    std::size_t label_index() const { return label_index_; }
    std::vector<OutputLayerInstance>& active() { return active_; }
    const std::vector<OutputLayerInstance>& active() const { return active_; }
    std::deque<OutputLayerInstance>& pool() { return pool_; }
    const std::deque<OutputLayerInstance>& pool() const { return pool_; }

    /// Every active instance accumulates the observed rows with one-hot
    /// targets and re-solves. Empty subsets leave the component untouched.
    void train(const Matrix& m, const MaskedColumn& col) {
        if (col.empty()) return;
        Matrix sub(col.size(), m.cols());
        Matrix one_hot(col.size(), 2);
        for (std::size_t r = 0; r < col.size(); ++r) {
            const double* src = m.row_ptr(col.row_index[r]);
            double* dst = sub.row_ptr(r);
            for (std::size_t j = 0; j < m.cols(); ++j) dst[j] = src[j];
            one_hot(r, 0) = 1.0 - col.target[r];
            one_hot(r, 1) = col.target[r];
        }
        for (OutputLayerInstance& inst : active_) {
            accumulate(inst.acc, sub, one_hot);
            inst.weights = ridge_solve(inst.acc);
            ++inst.age;
        }
    }

    /// Summed scores of the active instances, n x 2.
    Matrix predict(const Matrix& m) const {
        Matrix total(m.rows(), 2);
        for (const OutputLayerInstance& inst : active_) {
            if (!inst.trained()) continue;
            const Matrix p = inst.predict(m);
            for (std::size_t i = 0; i < m.rows(); ++i) {
                total(i, 0) += p(i, 0);
                total(i, 1) += p(i, 1);
            }
        }
        return total;
    }

    /// Chunk accuracy of every active and pooled instance against the
    /// observed rows; pooled instances are scored with frozen weights.
    /// No observed rows: accuracies are left as they were.
    void score(const Matrix& m, const MaskedColumn& col) {
        if (col.empty()) return;
        for (OutputLayerInstance& inst : active_) inst.last_accuracy = instance_accuracy(inst, m, col);
        for (OutputLayerInstance& inst : pool_) inst.last_accuracy = instance_accuracy(inst, m, col);
    }

    /// Drift step: active instances with accuracy strictly below theta move
    /// to the pool (evicting the oldest entry when full); each vacancy is
    /// filled by the first pooled instance at or above theta, else by a
    /// fresh instance with empty statistics.
    std::vector<LifecycleEvent> adapt(double theta) {
        std::vector<LifecycleEvent> events;
        for (std::size_t slot = 0; slot < active_.size(); ++slot) {
            if (active_[slot].last_accuracy >= theta) continue;

            OutputLayerInstance removed = std::move(active_[slot]);
            removed.state = InstanceState::Removed;
            pool_.push_back(std::move(removed));
            events.push_back({0, label_index_, slot, LifecycleKind::Removed});
            if (pool_.size() > pool_capacity_) {
                pool_.pop_front();
                events.push_back({0, label_index_, slot, LifecycleKind::EvictedFromPool});
            }

            bool refilled = false;
            for (std::size_t p = 0; p < pool_.size(); ++p) {
                if (pool_[p].last_accuracy >= theta) {
                    pool_[p].state = InstanceState::EligibleForRetrieval;
                    active_[slot] = std::move(pool_[p]);
                    active_[slot].state = InstanceState::Active;
                    pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(p));
                    events.push_back({0, label_index_, slot, LifecycleKind::RetrievedFromPool});
                    refilled = true;
                    break;
                }
            }
            if (!refilled) {
                OutputLayerInstance fresh(feature_dim_, lambda_);
                fresh.state = InstanceState::Active;
                active_[slot] = std::move(fresh);
                events.push_back({0, label_index_, slot, LifecycleKind::CreatedNew});
            }
        }
        return events;
    }

private:
    static double instance_accuracy(const OutputLayerInstance& inst, const Matrix& m,
                                    const MaskedColumn& col) {
        std::size_t correct = 0;
        if (!inst.trained()) {
            // zero scores tie toward positive for every row
            for (double t : col.target) correct += t == 1.0;
        } else {
            for (std::size_t r = 0; r < col.size(); ++r) {
                const double* row = m.row_ptr(col.row_index[r]);
                double s0 = 0.0, s1 = 0.0;
                for (std::size_t k = 0; k < m.cols(); ++k) {
                    s0 += row[k] * inst.weights(k, 0);
                    s1 += row[k] * inst.weights(k, 1);
                }
                const double pred = s1 >= s0 ? 1.0 : 0.0;
                correct += pred == col.target[r];
            }
        }
        return static_cast<double>(correct) / static_cast<double>(col.size());
    }

    std::size_t label_index_ = 0;
    std::size_t ensemble_size_ = 0;
    std::size_t pool_capacity_ = 0;
    std::size_t feature_dim_ = 0;
    double lambda_ = 1e-3;
    std::vector<OutputLayerInstance> active_;
    std::deque<OutputLayerInstance> pool_;
};

} // namespace mlbels
