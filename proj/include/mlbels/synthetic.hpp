#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mlbels/data_io.hpp"
#include "mlbels/rng.hpp"

namespace mlbels {

enum class DriftKind { Abrupt, Gradual, Recurring };

inline const char* drift_kind_name(DriftKind k) {
    switch (k) {
        case DriftKind::Abrupt: return "abrupt";
        case DriftKind::Gradual: return "gradual";
        case DriftKind::Recurring: return "recurring";
    }
    return "?";
}

/// Threshold concept for one label: positive iff x[a] + x[b] > threshold.
struct LabelConcept {
    std::size_t a = 0;
    std::size_t b = 1;
    double threshold = 8.0;

    friend bool operator==(const LabelConcept&, const LabelConcept&) = default;
};

using ConceptTable = std::vector<LabelConcept>;

/// P(x_a + x_b > threshold) for independent features uniform on [0, 10]:
/// the sum is triangular on [0, 20].
inline double sea_positive_probability(double threshold) {
    if (threshold <= 0.0) return 1.0;
    if (threshold >= 20.0) return 0.0;
    if (threshold <= 10.0) return 1.0 - threshold * threshold / 200.0;
    return (20.0 - threshold) * (20.0 - threshold) / 200.0;
}

/// Inverse of sea_positive_probability.
inline double sea_threshold_for_probability(double p) {
    if (p <= 0.0) return 20.0;
    if (p >= 1.0) return 0.0;
    if (p >= 0.5) return std::sqrt(200.0 * (1.0 - p));
    return 20.0 - std::sqrt(200.0 * p);
}

/// Random concept table whose expected label cardinality is target_lc:
/// per-label positive rates are jittered around target_lc / n_labels and
/// attribute pairs are drawn at random (shared pairs carry the label
/// dependency).
inline ConceptTable make_concept_table(std::size_t n_labels, double target_lc,
                                       UniformSource& rng) {
    if (n_labels == 0) throw std::invalid_argument("concept table needs labels");
    const double base = target_lc / static_cast<double>(n_labels);
    if (!(base > 0.0) || base >= 1.0)
        throw std::invalid_argument("target label cardinality out of range");

    // jitter rates multiplicatively, then renormalize so the mean stays base
    std::vector<double> rates(n_labels);
    double sum = 0.0;
    for (double& r : rates) {
        r = base * (0.6 + 0.8 * rng.unit());
        sum += r;
    }
    const double correction = base * static_cast<double>(n_labels) / sum;

    static constexpr std::size_t kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    ConceptTable table(n_labels);
    for (std::size_t i = 0; i < n_labels; ++i) {
        const std::size_t pair = rng.below(3);
        table[i].a = kPairs[pair][0];
        table[i].b = kPairs[pair][1];
        double p = rates[i] * correction;
        if (p > 0.95) p = 0.95;
        if (p < 0.01) p = 0.01;
        table[i].threshold = sea_threshold_for_probability(p);
    }
    return table;
}

inline double expected_cardinality(const ConceptTable& table) {
    double lc = 0.0;
    for (const LabelConcept& c : table) lc += sea_positive_probability(c.threshold);
    return lc;
}

struct SyntheticSpec {
    std::size_t n_labels = 10;
    std::size_t n_instances = 20000;
    DriftKind drift_kind = DriftKind::Abrupt;
    std::vector<std::size_t> drift_points;  // defaults to n/3 and 2n/3
    double noise_fraction = 0.0;            // per-label flip probability
    std::uint64_t seed = 1;
    std::vector<double> lc_targets;         // per concept; defaults derived from n_labels
    std::size_t chunk_size = 500;
    double gradual_window_fraction = 0.10;  // of the stream, centered at each drift
    std::string name;

    std::vector<std::size_t> resolved_drift_points() const {
        if (!drift_points.empty()) return drift_points;
        return {n_instances / 3, 2 * n_instances / 3};
    }

    std::vector<double> resolved_lc_targets(std::size_t n_concepts) const {
        std::vector<double> targets = lc_targets;
        const double c = static_cast<double>(n_labels);
        const double defaults[3] = {0.33 * c, 0.15 * c, 0.40 * c};
        for (std::size_t i = targets.size(); i < n_concepts; ++i)
            targets.push_back(defaults[i % 3]);
        return targets;
    }
};

namespace detail {

class SyntheticStream final : public ChunkStream {
public:
    // noise draws come from their own stream so that runs differing only in
    // noise_fraction share the exact feature sequence
    explicit SyntheticStream(const SyntheticSpec& spec)
        : spec_(spec), rng_(spec.seed), noise_rng_(mix_seed(spec.seed, 0x9015E)) {
        drift_points_ = spec_.resolved_drift_points();
        for (std::size_t i = 0; i < drift_points_.size(); ++i) {
            if (drift_points_[i] == 0 || drift_points_[i] >= spec_.n_instances)
                throw std::invalid_argument("drift point outside the stream");
            if (i > 0 && drift_points_[i] <= drift_points_[i - 1])
                throw std::invalid_argument("drift points must be strictly increasing");
        }
        if (!(spec_.noise_fraction >= 0.0 && spec_.noise_fraction <= 1.0))
            throw std::invalid_argument("noise fraction must be in [0, 1]");

        const std::size_t n_concepts = drift_points_.size() + 1;
        const std::vector<double> targets = spec_.resolved_lc_targets(n_concepts);
        UniformSource concept_rng(mix_seed(spec_.seed, 0xC0CEB7));
        for (std::size_t i = 0; i < n_concepts; ++i) {
            if (spec_.drift_kind == DriftKind::Recurring && i + 1 == n_concepts)
                tables_.push_back(tables_.front());  // old concept reappears
            else
                tables_.push_back(make_concept_table(spec_.n_labels, targets[i], concept_rng));
        }

        header_.n_features = 3;
        header_.n_labels = spec_.n_labels;
        header_.n_instances = spec_.n_instances;
        header_.name = spec_.name.empty() ? "synthetic" : spec_.name;
    }

    const DatasetHeader& header() const override { return header_; }

    const std::vector<ConceptTable>& concept_tables() const { return tables_; }

    /// Concept in force for instance t, with a sigmoidal old/new mix inside
    /// the transition window for gradual drift.
    std::size_t concept_at(std::size_t t, UniformSource& rng) const {
        std::size_t base = 0;
        for (std::size_t i = 0; i < drift_points_.size(); ++i)
            if (t >= drift_points_[i]) base = i + 1;

        if (spec_.drift_kind != DriftKind::Gradual) return base;

        const double window =
            spec_.gradual_window_fraction * static_cast<double>(spec_.n_instances);
        if (window <= 0.0) return base;
        for (std::size_t i = 0; i < drift_points_.size(); ++i) {
            const double d = static_cast<double>(t) - static_cast<double>(drift_points_[i]);
            if (std::abs(d) <= window / 2.0) {
                const double p_new = 1.0 / (1.0 + std::exp(-4.0 * d / window));
                return rng.unit() < p_new ? i + 1 : i;
            }
        }
        return base;
    }

    std::optional<Chunk> next() override {
        if (emitted_ >= spec_.n_instances) return std::nullopt;
        const std::size_t n = std::min(spec_.chunk_size, spec_.n_instances - emitted_);

        Chunk chunk;
        chunk.x = Matrix(n, 3);
        chunk.labels = LabelObservation(n, spec_.n_labels);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t t = emitted_ + i;
            for (std::size_t j = 0; j < 3; ++j) chunk.x(i, j) = rng_.range(0.0, 10.0);
            const ConceptTable& table = tables_[concept_at(t, rng_)];
            for (std::size_t j = 0; j < spec_.n_labels; ++j) {
                const LabelConcept& c = table[j];
                bool positive = chunk.x(i, c.a) + chunk.x(i, c.b) > c.threshold;
                if (spec_.noise_fraction > 0.0 && noise_rng_.unit() < spec_.noise_fraction)
                    positive = !positive;
                chunk.labels.set(i, j, positive ? +1 : -1);
            }
        }
        emitted_ += n;
        return chunk;
    }

private:
    SyntheticSpec spec_;
    UniformSource rng_;
    UniformSource noise_rng_;
    std::vector<std::size_t> drift_points_;
    std::vector<ConceptTable> tables_;
    DatasetHeader header_;
    std::size_t emitted_ = 0;
};

} // namespace detail

inline std::unique_ptr<ChunkStream> generate_synthetic(const SyntheticSpec& spec) {
    return std::make_unique<detail::SyntheticStream>(spec);
}

/// Variant with access to the concept tables, for tests and tools.
inline std::unique_ptr<detail::SyntheticStream> generate_synthetic_stream(
    const SyntheticSpec& spec) {
    return std::make_unique<detail::SyntheticStream>(spec);
}

} // namespace mlbels
