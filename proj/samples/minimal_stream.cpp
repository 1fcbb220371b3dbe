// Minimal end-to-end run: synthetic drifting stream, default model,
// prequential evaluation, metrics on stdout.

#include <iostream>

#include "mlbels/mlbels.hpp"

int main() {
    mlbels::SyntheticSpec stream_spec;
    stream_spec.n_labels = 10;
    stream_spec.n_instances = 10000;
    stream_spec.chunk_size = 250;
    stream_spec.noise_fraction = 0.1;
    stream_spec.seed = 42;

    auto stream = mlbels::generate_synthetic(stream_spec);

    mlbels::ModelConfig config;  // stock defaults: e=3, d_f=25, d_e=1
    mlbels::MLBelsModel model(config, stream->header().n_features, stream->header().n_labels);

    const mlbels::PrequentialReport report = mlbels::run_prequential(model, *stream);

    std::cout << "chunks:        " << report.chunks.size() << "\n"
              << "example acc:   " << report.cumulative_example_accuracy() << "\n"
              << "example F1:    " << report.cumulative_example_f1() << "\n"
              << "micro F1:      " << report.cumulative_micro_f1() << "\n"
              << "sec / 10 inst: " << report.seconds_per_10_instances() << "\n";
    return 0;
}
