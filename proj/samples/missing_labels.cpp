// Missing-label run: keep only 30% of the training labels and compare
// against the fully supervised model on the same stream.

#include <iostream>

#include "mlbels/mlbels.hpp"

int main() {
    mlbels::SyntheticSpec stream_spec;
    stream_spec.n_labels = 10;
    stream_spec.n_instances = 10000;
    stream_spec.chunk_size = 250;
    stream_spec.noise_fraction = 0.25;
    stream_spec.seed = 7;

    mlbels::ModelConfig config;

    auto run = [&](double keep_fraction) {
        auto stream = mlbels::generate_synthetic(stream_spec);
        mlbels::MLBelsModel model(config, stream->header().n_features, stream->header().n_labels);
        mlbels::EvalOptions opt;
        opt.label_keep_fraction = keep_fraction;
        opt.mask_seed = 1;
        return mlbels::run_prequential(model, *stream, opt);
    };

    const auto supervised = run(1.0);
    const auto partial = run(0.3);

    std::cout << "supervised example acc:  " << supervised.cumulative_example_accuracy() << "\n"
              << "30% labels example acc:  " << partial.cumulative_example_accuracy() << "\n";
    return 0;
}
