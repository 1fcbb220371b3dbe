#pragma once

#include <chrono>
#include <functional>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mlbels/data_io.hpp"
#include "mlbels/labels.hpp"
#include "mlbels/metrics.hpp"
#include "mlbels/model.hpp"
#include "mlbels/rng.hpp"

namespace mlbels {

struct ChunkRecord {
    std::size_t chunk = 0;
    std::size_t n = 0;
    double example_acc = 0.0;
    double example_f1 = 0.0;
    MicroCounts micro;
    double seconds = 0.0;

    double micro_f1_value() const { return micro_f1(micro); }
};

/// Per-chunk records plus cumulative aggregates. Aggregates are always
/// recomputed from the raw per-chunk values, so serialization keeps only the
/// records themselves.
struct PrequentialReport {
    std::vector<ChunkRecord> chunks;
    bool include_first_chunk = false;
    bool aborted = false;
    std::string error;

    std::size_t counted_from() const {
        return include_first_chunk || chunks.size() <= 1 ? 0 : 1;
    }

    std::size_t total_instances() const {
        std::size_t n = 0;
        for (std::size_t i = counted_from(); i < chunks.size(); ++i) n += chunks[i].n;
        return n;
    }

    double cumulative_example_accuracy() const {
        double s = 0.0;
        const std::size_t n = total_instances();
        for (std::size_t i = counted_from(); i < chunks.size(); ++i)
            s += chunks[i].example_acc * static_cast<double>(chunks[i].n);
        return n == 0 ? 0.0 : s / static_cast<double>(n);
    }

    double cumulative_example_f1() const {
        double s = 0.0;
        const std::size_t n = total_instances();
        for (std::size_t i = counted_from(); i < chunks.size(); ++i)
            s += chunks[i].example_f1 * static_cast<double>(chunks[i].n);
        return n == 0 ? 0.0 : s / static_cast<double>(n);
    }

    double cumulative_micro_f1() const {
        MicroCounts total;
        for (std::size_t i = counted_from(); i < chunks.size(); ++i) total += chunks[i].micro;
        return micro_f1(total);
    }

    /// Wall time normalized to seconds per 10 instances, over every chunk.
    double seconds_per_10_instances() const {
        double time = 0.0;
        std::size_t n = 0;
        for (const ChunkRecord& r : chunks) {
            time += r.seconds;
            n += r.n;
        }
        return n == 0 ? 0.0 : time / static_cast<double>(n) * 10.0;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["include_first_chunk"] = include_first_chunk;
        j["aborted"] = aborted;
        j["error"] = error;
        j["chunks"] = nlohmann::json::array();
        for (const ChunkRecord& r : chunks) {
            j["chunks"].push_back({{"chunk", r.chunk},
                                   {"n", r.n},
                                   {"example_acc", r.example_acc},
                                   {"example_f1", r.example_f1},
                                   {"tp", r.micro.tp},
                                   {"fp", r.micro.fp},
                                   {"fn", r.micro.fn},
                                   {"seconds", r.seconds}});
        }
        return j;
    }

    static PrequentialReport from_json(const nlohmann::json& j) {
        PrequentialReport rep;
        rep.include_first_chunk = j.at("include_first_chunk").get<bool>();
        rep.aborted = j.at("aborted").get<bool>();
        rep.error = j.at("error").get<std::string>();
        for (const auto& c : j.at("chunks")) {
            ChunkRecord r;
            r.chunk = c.at("chunk").get<std::size_t>();
            r.n = c.at("n").get<std::size_t>();
            r.example_acc = c.at("example_acc").get<double>();
            r.example_f1 = c.at("example_f1").get<double>();
            r.micro.tp = c.at("tp").get<std::uint64_t>();
            r.micro.fp = c.at("fp").get<std::uint64_t>();
            r.micro.fn = c.at("fn").get<std::uint64_t>();
            r.seconds = c.at("seconds").get<double>();
            rep.chunks.push_back(r);
        }
        return rep;
    }

    friend bool operator==(const PrequentialReport& a, const PrequentialReport& b) {
        if (a.chunks.size() != b.chunks.size() || a.include_first_chunk != b.include_first_chunk ||
            a.aborted != b.aborted || a.error != b.error)
            return false;
        for (std::size_t i = 0; i < a.chunks.size(); ++i) {
            const ChunkRecord& x = a.chunks[i];
            const ChunkRecord& y = b.chunks[i];
            if (x.chunk != y.chunk || x.n != y.n || x.example_acc != y.example_acc ||
                x.example_f1 != y.example_f1 || x.micro.tp != y.micro.tp ||
                x.micro.fp != y.micro.fp || x.micro.fn != y.micro.fn || x.seconds != y.seconds)
                return false;
        }
        return true;
    }
};

enum class Phase { Test, Train };

struct EvalOptions {
    double label_keep_fraction = 1.0;  // < 1 drops training labels at random
    std::uint64_t mask_seed = 0;
    bool include_first_chunk = false;
    std::function<void(Phase, std::size_t)> on_phase;  // instrumentation hook
    std::vector<BinaryMatrix>* capture_predictions = nullptr;
};

/// Interleaved test-then-train over the whole stream. Metrics are always
/// computed against the full ground truth; label dropping affects training
/// only. A chunk whose shape disagrees with the first aborts the run and the
/// partial report carries the error.
///
/// Model requirements: input_dim(), n_labels(), test(x) -> BinaryMatrix,
/// train(x, labels). MLBelsModel satisfies them; test stubs may too.
template <typename Model = MLBelsModel>
PrequentialReport run_prequential(Model& model, ChunkStream& stream,
                                  const EvalOptions& opt = {}) {
    using clock = std::chrono::steady_clock;
    PrequentialReport report;
    report.include_first_chunk = opt.include_first_chunk;

    std::size_t index = 0;
    while (auto chunk = stream.next()) {
        if (chunk->x.cols() != model.input_dim() ||
            chunk->labels.cols() != model.n_labels() ||
            chunk->x.rows() != chunk->labels.rows()) {
            report.aborted = true;
            report.error = "chunk " + std::to_string(index) + " has inconsistent shape";
            break;
        }
        if (chunk->rows() == 0) continue;

        if (opt.on_phase) opt.on_phase(Phase::Test, index);
        const auto t0 = clock::now();
        const BinaryMatrix yhat = model.test(chunk->x);
        const auto t1 = clock::now();

        const BinaryMatrix truth = positives_of(chunk->labels);
        ChunkRecord rec;
        rec.chunk = index;
        rec.n = chunk->rows();
        rec.example_acc = example_accuracy(truth, yhat);
        rec.example_f1 = example_f1(truth, yhat);
        rec.micro = micro_counts(truth, yhat);
        if (opt.capture_predictions) opt.capture_predictions->push_back(yhat);

        if (opt.on_phase) opt.on_phase(Phase::Train, index);
        const auto t2 = clock::now();
        if (opt.label_keep_fraction < 1.0) {
            const LabelObservation masked =
                drop_labels(chunk->labels, opt.label_keep_fraction, mix_seed(opt.mask_seed, index));
            model.train(chunk->x, masked);
        } else {
            model.train(chunk->x, chunk->labels);
        }
        const auto t3 = clock::now();

        rec.seconds = std::chrono::duration<double>(t1 - t0).count() +
                      std::chrono::duration<double>(t3 - t2).count();
        report.chunks.push_back(rec);
        ++index;
    }
    return report;
}

/// Per-chunk CSV: one row per chunk plus a #summary line.
inline void write_chunk_csv(std::ostream& out, const PrequentialReport& report) {
    out << "chunk,n,example_acc,example_f1,micro_f1,seconds\n";
    out << std::setprecision(17);
    for (const ChunkRecord& r : report.chunks)
        out << r.chunk << ',' << r.n << ',' << r.example_acc << ',' << r.example_f1 << ','
            << r.micro_f1_value() << ',' << r.seconds << '\n';
    out << "#summary," << report.total_instances() << ',' << report.cumulative_example_accuracy()
        << ',' << report.cumulative_example_f1() << ',' << report.cumulative_micro_f1() << ','
        << report.seconds_per_10_instances() << '\n';
}

/// Temporal accuracy series for plotting: per-chunk accuracy next to the
/// cumulative-so-far value.
inline void write_series_csv(std::ostream& out, const PrequentialReport& report) {
    out << "chunk,example_acc,cumulative_example_acc\n";
    out << std::setprecision(17);
    double weighted = 0.0;
    std::size_t seen = 0;
    for (const ChunkRecord& r : report.chunks) {
        weighted += r.example_acc * static_cast<double>(r.n);
        seen += r.n;
        out << r.chunk << ',' << r.example_acc << ','
            << (seen == 0 ? 0.0 : weighted / static_cast<double>(seen)) << '\n';
    }
}

} // namespace mlbels
