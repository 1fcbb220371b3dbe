#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlbels/ensemble.hpp"
#include "mlbels/labels.hpp"
#include "mlbels/mapping.hpp"
#include "mlbels/matrix.hpp"
#include "mlbels/parallel.hpp"
#include "mlbels/weighting.hpp"

namespace mlbels {

/// Ablation variants: plain binary relevance (single instance, no drift
/// handling), ensembles without weighting, ensembles with weighting always
/// on, and the default where label cardinality triggers the weighting.
enum class Variant { BR, BR_Ens, BR_Ens_W, Default };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::BR: return "br";
        case Variant::BR_Ens: return "br-ens";
        case Variant::BR_Ens_W: return "br-ens-w";
        case Variant::Default: return "default";
    }
    return "?";
}

inline Variant variant_from_name(const std::string& s) {
    if (s == "br") return Variant::BR;
    if (s == "br-ens") return Variant::BR_Ens;
    if (s == "br-ens-w") return Variant::BR_Ens_W;
    if (s == "default") return Variant::Default;
    throw std::invalid_argument("unknown variant: " + s);
}

struct ModelConfig {
    std::size_t ensemble_size = 3;
    std::size_t d_f = 25;
    std::size_t d_e = 1;
    double lambda = 1e-3;
    double theta = 0.5;      // instance accuracy threshold for removal
    double tau = 1.5;        // label cardinality threshold for weighting
    std::size_t pool_size = 100;
    std::size_t chunk_size = 500;
    Variant variant = Variant::Default;
    std::uint64_t seed = 1;
    bool lc_chunk_local = false;

    std::size_t effective_ensemble_size() const {
        return variant == Variant::BR ? 1 : ensemble_size;
    }
    bool adaptation_enabled() const { return variant != Variant::BR; }
};

/// Full model: shared mapper, one binary-relevance ensemble per label, the
/// weight classifier, and the cardinality tracker. test() is const and
/// mutates nothing; train() advances all learning state by one chunk.
///
/// Not safe for concurrent process_chunk calls; per-label work inside a
/// chunk fans out across workers when MLBELS_THREADS allows.
class MLBelsModel {
public:
    MLBelsModel(const ModelConfig& config, std::size_t input_dim, std::size_t n_labels)
        : cfg_(config),
          n_labels_(n_labels),
          mapper_(make_mapper(input_dim, config.d_f, config.d_e, config.seed)),
          weight_clf_(config.d_f + config.d_e, n_labels, config.lambda),
          tracker_(config.lc_chunk_local) {
        if (n_labels == 0) throw std::invalid_argument("model needs at least one label");
        components_.reserve(n_labels);
        for (std::size_t i = 0; i < n_labels; ++i)
            components_.emplace_back(i, cfg_.effective_ensemble_size(), cfg_.pool_size,
                                     mapper_.output_dim(), cfg_.lambda);
    }

    std::size_t n_labels() const { return n_labels_; }
    std::size_t input_dim() const { return mapper_.input_dim; }
    const ModelConfig& config() const { return cfg_; }
    const BroadMapper& mapper() const { return mapper_; }
    const std::vector<BRComponent>& components() const { return components_; }
    std::vector<BRComponent>& components() { return components_; }
    const WeightClassifier& weight_classifier() const { return weight_clf_; }
    const CardinalityTracker& tracker() const { return tracker_; }
    const std::vector<LifecycleEvent>& lifecycle_log() const { return lifecycle_; }
    std::size_t chunks_trained() const { return chunk_index_; }

    bool weighting_active() const {
        switch (cfg_.variant) {
            case Variant::BR_Ens_W: return true;
            case Variant::Default: return should_weight(tracker_, cfg_.tau);
            default: return false;
        }
    }

    /// Per-label two-channel scores after optional weighting, in label order.
    std::vector<Matrix> test_scores(const Matrix& x) const {
        const Matrix m = map_features(mapper_, x);
        std::vector<Matrix> p_c(n_labels_);
        parallel_for(n_labels_, [&](std::size_t i) { p_c[i] = components_[i].predict(m); });
        if (weighting_active()) {
            const Matrix p_w = weight_clf_.predict(m);
            p_c = apply_weights(p_c, p_w);
        }
        return p_c;
    }

    BinaryMatrix test(const Matrix& x) const { return decide(test_scores(x)); }

    /// One training chunk. Per label: score against observed rows, adapt the
    /// ensemble, then train on the observed subset. The weight classifier
    /// trains on the negative-imputed full matrix and the tracker counts
    /// observed positives. Labels with no observed rows are skipped entirely.
    void train(const Matrix& x, const LabelObservation& obs) {
        require_shape(x.rows() == obs.rows(), "train: rows");
        require_shape(obs.cols() == n_labels_, "train: label count");
        if (x.rows() == 0) return;

        const Matrix m = map_features(mapper_, x);

        std::vector<std::vector<LifecycleEvent>> per_label_events(n_labels_);
        parallel_for(n_labels_, [&](std::size_t i) {
            const MaskedColumn col = mask_for_br(obs, i);
            if (col.empty()) return;
            components_[i].score(m, col);
            if (cfg_.adaptation_enabled()) per_label_events[i] = components_[i].adapt(cfg_.theta);
            components_[i].train(m, col);
        });
        for (std::size_t i = 0; i < n_labels_; ++i)
            for (LifecycleEvent ev : per_label_events[i]) {
                ev.chunk = chunk_index_;
                lifecycle_.push_back(ev);
            }

        weight_clf_.train(m, impute_for_weights(obs));
        tracker_.update(obs);
        ++chunk_index_;
    }

    /// Interleaved step: predictions are produced before the chunk's labels
    /// touch any state.
    BinaryMatrix process_chunk(const Matrix& x, const LabelObservation& obs) {
        BinaryMatrix yhat = test(x);
        train(x, obs);
        return yhat;
    }

private:
    ModelConfig cfg_;
    std::size_t n_labels_ = 0;
    BroadMapper mapper_;
    std::vector<BRComponent> components_;
    WeightClassifier weight_clf_;
    CardinalityTracker tracker_;
    std::size_t chunk_index_ = 0;
    std::vector<LifecycleEvent> lifecycle_;
};

} // namespace mlbels
