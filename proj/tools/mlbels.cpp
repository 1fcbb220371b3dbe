// mlbels: prequential runner and ablation driver for the streaming
// multi-label classifier.
//
//   mlbels run --dataset yeast.arff --chunk 50 --repeats 5 --out results
//   mlbels run --synthetic A:10:20 --instances 20000
//   mlbels ablation --synthetic G:10:10 --seed 1,2,3,4,5
//
// MLBELS_THREADS caps per-label worker parallelism (default: serial).

#include <sys/resource.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mlbels/mlbels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunSpec {
    std::string dataset;
    std::string synthetic;  // KIND:LABELS:NOISE
    std::string format = "arff";
    std::size_t sparse_features = 0;
    std::size_t sparse_labels = 0;
    std::string labels_at;   // "", "prefix" or "suffix"
    int label_count = 0;     // ARFF override, 0 = use the relation annotation
    bool streaming_scaling = false;

    std::size_t chunk = 0;   // 0 = pick from the dataset size
    std::size_t instances = 20000;
    std::vector<std::size_t> drift_points;
    std::vector<double> lc_targets;
    double drift_window = 0.10;

    mlbels::ModelConfig model;
    std::string variant = "default";
    double label_fraction = 1.0;
    std::uint64_t mask_seed = 0;
    std::size_t repeats = 1;
    std::vector<std::uint64_t> seeds;
    std::string out_dir = "mlbels_out";
    bool include_first_chunk = false;
    std::string dump_arff;
};

std::size_t auto_chunk_size(std::size_t n_instances) {
    if (n_instances == 0) return 500;
    if (n_instances < 1500) return 50;
    if (n_instances < 4000) return 100;
    if (n_instances < 15000) return 250;
    if (n_instances < 40000) return 500;
    return 1000;
}

mlbels::SyntheticSpec parse_synthetic(const RunSpec& spec) {
    std::vector<std::string> parts;
    std::istringstream in(spec.synthetic);
    std::string item;
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() != 3)
        throw std::invalid_argument("--synthetic expects KIND:LABELS:NOISE, e.g. A:10:20");

    mlbels::SyntheticSpec out;
    const char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(parts[0][0])));
    if (kind == 'A')
        out.drift_kind = mlbels::DriftKind::Abrupt;
    else if (kind == 'G')
        out.drift_kind = mlbels::DriftKind::Gradual;
    else if (kind == 'R')
        out.drift_kind = mlbels::DriftKind::Recurring;
    else
        throw std::invalid_argument("synthetic kind must be A, G or R");

    out.n_labels = std::stoul(parts[1]);
    out.noise_fraction = std::stod(parts[2]) / 100.0;
    out.n_instances = spec.instances;
    out.drift_points = spec.drift_points;
    out.lc_targets = spec.lc_targets;
    out.gradual_window_fraction = spec.drift_window;
    out.name = std::string(1, kind) + "-" + parts[1] + "-" + parts[2];
    return out;
}

std::string dataset_stem(const RunSpec& spec) {
    if (!spec.synthetic.empty()) {
        mlbels::SyntheticSpec s = parse_synthetic(spec);
        return s.name;
    }
    return fs::path(spec.dataset).stem().string();
}

std::unique_ptr<mlbels::ChunkStream> open_stream(const RunSpec& spec, std::size_t chunk_size,
                                                 std::uint64_t seed) {
    if (!spec.synthetic.empty()) {
        mlbels::SyntheticSpec s = parse_synthetic(spec);
        s.chunk_size = chunk_size;
        s.seed = seed;
        return mlbels::generate_synthetic(s);
    }
    if (spec.format == "sparse") {
        mlbels::DatasetHeader header;
        header.n_features = spec.sparse_features;
        header.n_labels = spec.sparse_labels;
        header.name = dataset_stem(spec);
        return mlbels::load_sparse(spec.dataset, header, chunk_size);
    }
    mlbels::arff::LoadOptions opt;
    opt.chunk_size = chunk_size;
    opt.streaming_scaling = spec.streaming_scaling;
    if (spec.label_count != 0) opt.label_count = static_cast<std::size_t>(std::abs(spec.label_count));
    if (spec.labels_at == "prefix") opt.label_position = mlbels::DatasetHeader::LabelPosition::Prefix;
    if (spec.labels_at == "suffix") opt.label_position = mlbels::DatasetHeader::LabelPosition::Suffix;
    if (spec.label_count < 0) opt.label_position = mlbels::DatasetHeader::LabelPosition::Suffix;
    return mlbels::load_arff(spec.dataset, opt);
}

/// Stream seed: real datasets replay identically per repeat, synthetic
/// streams are re-drawn per seed.
struct RunResult {
    std::uint64_t seed = 0;
    mlbels::PrequentialReport report;
};

std::string percent_tag(double keep_fraction) {
    if (keep_fraction >= 1.0) return "";
    std::ostringstream out;
    out << "(" << static_cast<int>(keep_fraction * 100.0 + 0.5) << "%)";
    return out.str();
}

RunResult run_once(const RunSpec& spec, std::size_t chunk_size, std::uint64_t seed,
                   mlbels::Variant variant) {
    auto stream = open_stream(spec, chunk_size, seed);

    mlbels::ModelConfig cfg = spec.model;
    cfg.variant = variant;
    cfg.seed = seed;
    cfg.chunk_size = chunk_size;

    mlbels::MLBelsModel model(cfg, stream->header().n_features, stream->header().n_labels);
    mlbels::EvalOptions opt;
    opt.label_keep_fraction = spec.label_fraction;
    opt.mask_seed = spec.mask_seed == 0 ? seed : spec.mask_seed;
    opt.include_first_chunk = spec.include_first_chunk;

    RunResult result;
    result.seed = seed;
    result.report = mlbels::run_prequential(model, *stream, opt);
    if (result.report.aborted) throw std::runtime_error("stream error: " + result.report.error);
    return result;
}

std::vector<std::uint64_t> resolve_seeds(const RunSpec& spec) {
    if (!spec.seeds.empty()) return spec.seeds;
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < std::max<std::size_t>(spec.repeats, 1); ++i)
        seeds.push_back(1 + i);
    return seeds;
}

std::size_t resolve_chunk_size(const RunSpec& spec) {
    if (spec.chunk != 0) return spec.chunk;
    if (!spec.synthetic.empty()) return auto_chunk_size(spec.instances);
    if (spec.format == "sparse") return 500;
    // probe the header for the instance count
    auto probe = open_stream(spec, 500, 1);
    return auto_chunk_size(probe->header().n_instances);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void write_run_outputs(const RunSpec& spec, const std::string& stem,
                       const std::vector<RunResult>& results) {
    fs::create_directories(spec.out_dir);
    for (const RunResult& r : results) {
        const std::string base =
            spec.out_dir + "/" + stem + "_seed" + std::to_string(r.seed);
        std::ofstream chunk_csv(base + ".csv");
        mlbels::write_chunk_csv(chunk_csv, r.report);
        std::ofstream series_csv(base + "_series.csv");
        mlbels::write_series_csv(series_csv, r.report);
        if (!chunk_csv || !series_csv)
            throw std::runtime_error("failed to write outputs under " + spec.out_dir);
    }
}

void write_summary(const RunSpec& spec, const std::string& stem, std::size_t chunk_size,
                   const std::vector<RunResult>& results) {
    const std::string tag = percent_tag(spec.label_fraction);
    const std::string path = spec.out_dir + "/" + stem + "_summary.csv";
    std::ofstream out(path);
    out << "run,seed,chunk,example_acc,example_f1,micro_f1,seconds_per_10\n";
    out.precision(17);
    std::vector<double> acc, f1, micro, sec;
    for (const RunResult& r : results) {
        acc.push_back(r.report.cumulative_example_accuracy());
        f1.push_back(r.report.cumulative_example_f1());
        micro.push_back(r.report.cumulative_micro_f1());
        sec.push_back(r.report.seconds_per_10_instances());
        out << "ML-BELS" << tag << ',' << r.seed << ',' << chunk_size << ',' << acc.back() << ','
            << f1.back() << ',' << micro.back() << ',' << sec.back() << '\n';
    }
    out << "mean" << ",," << chunk_size << ',' << mean_of(acc) << ',' << mean_of(f1) << ','
        << mean_of(micro) << ',' << mean_of(sec) << '\n';
    if (!out) throw std::runtime_error("failed to write " + path);

    std::cout << "ML-BELS" << tag << " " << stem << " chunk=" << chunk_size
              << " seeds=" << results.size() << "\n"
              << "  example_acc=" << mean_of(acc) << " example_f1=" << mean_of(f1)
              << " micro_f1=" << mean_of(micro) << " sec_per_10=" << mean_of(sec) << "\n"
              << "  summary: " << path << "\n";
}

void report_peak_rss() {
    struct rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) == 0)
        std::cout << "peak_rss_mb=" << static_cast<double>(usage.ru_maxrss) / 1024.0 << "\n";
}

int do_run(const RunSpec& spec) {
    const std::size_t chunk_size = resolve_chunk_size(spec);
    const std::vector<std::uint64_t> seeds = resolve_seeds(spec);
    const mlbels::Variant variant = mlbels::variant_from_name(spec.variant);
    const std::string stem = dataset_stem(spec) + (spec.variant == "default" ? "" : "_" + spec.variant) +
                             (spec.label_fraction < 1.0
                                  ? "_keep" + std::to_string(static_cast<int>(spec.label_fraction * 100.0 + 0.5))
                                  : "");

    if (!spec.dump_arff.empty()) {
        if (spec.synthetic.empty()) throw std::invalid_argument("--dump-arff needs --synthetic");
        auto stream = open_stream(spec, chunk_size, seeds.front());
        std::ofstream out(spec.dump_arff);
        mlbels::export_arff(out, *stream);
        if (!out) throw std::runtime_error("failed to write " + spec.dump_arff);
        std::cout << "wrote " << spec.dump_arff << "\n";
    }

    std::vector<RunResult> results;
    for (std::uint64_t seed : seeds) results.push_back(run_once(spec, chunk_size, seed, variant));

    write_run_outputs(spec, stem, results);
    write_summary(spec, stem, chunk_size, results);
    report_peak_rss();
    return 0;
}

int do_ablation(const RunSpec& spec) {
    const std::size_t chunk_size = resolve_chunk_size(spec);
    const std::vector<std::uint64_t> seeds = resolve_seeds(spec);
    const std::string stem = dataset_stem(spec);

    const mlbels::Variant variants[4] = {mlbels::Variant::BR, mlbels::Variant::BR_Ens,
                                         mlbels::Variant::BR_Ens_W, mlbels::Variant::Default};
    double accuracy[4] = {0, 0, 0, 0};
    double cardinality = 0.0;
    for (int v = 0; v < 4; ++v) {
        std::vector<double> acc;
        for (std::uint64_t seed : seeds) {
            const RunResult r = run_once(spec, chunk_size, seed, variants[v]);
            acc.push_back(r.report.cumulative_example_accuracy());
        }
        accuracy[v] = mean_of(acc);
    }
    {
        // measured label cardinality of the source, for the report row
        auto stream = open_stream(spec, chunk_size, seeds.front());
        std::uint64_t positives = 0, instances = 0;
        while (auto chunk = stream->next()) {
            for (std::size_t i = 0; i < chunk->rows(); ++i)
                for (std::size_t j = 0; j < chunk->labels.cols(); ++j)
                    positives += chunk->labels(i, j) > 0;
            instances += chunk->rows();
        }
        cardinality = instances == 0 ? 0.0 : double(positives) / double(instances);
    }

    fs::create_directories(spec.out_dir);
    const std::string path = spec.out_dir + "/" + stem + "_ablation.csv";
    std::ofstream out(path);
    out << "dataset,cardinality,br,br-ens,br-ens-w,default\n";
    out.precision(17);
    out << stem << ',' << cardinality << ',' << accuracy[0] << ',' << accuracy[1] << ','
        << accuracy[2] << ',' << accuracy[3] << '\n';
    if (!out) throw std::runtime_error("failed to write " + path);

    std::cout << "ablation " << stem << " (LC=" << cardinality << ", seeds=" << seeds.size()
              << ")\n  BR=" << accuracy[0] << " BR+Ens=" << accuracy[1]
              << " BR+Ens+W=" << accuracy[2] << " Default=" << accuracy[3] << "\n  table: " << path
              << "\n";
    report_peak_rss();
    return 0;
}

/// Config file values become option defaults; explicit flags win.
void apply_config_file(int argc, char** argv, RunSpec& spec) {
    std::string config_path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    if (config_path.empty()) return;

    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path);
    json j;
    in >> j;

    if (j.contains("chunk")) spec.chunk = j["chunk"].get<std::size_t>();
    if (j.contains("instances")) spec.instances = j["instances"].get<std::size_t>();
    if (j.contains("ensemble-size")) spec.model.ensemble_size = j["ensemble-size"].get<std::size_t>();
    if (j.contains("df")) spec.model.d_f = j["df"].get<std::size_t>();
    if (j.contains("de")) spec.model.d_e = j["de"].get<std::size_t>();
    if (j.contains("lambda")) spec.model.lambda = j["lambda"].get<double>();
    if (j.contains("theta")) spec.model.theta = j["theta"].get<double>();
    if (j.contains("tau")) spec.model.tau = j["tau"].get<double>();
    if (j.contains("pool")) spec.model.pool_size = j["pool"].get<std::size_t>();
    if (j.contains("variant")) spec.variant = j["variant"].get<std::string>();
    if (j.contains("label-fraction")) spec.label_fraction = j["label-fraction"].get<double>();
    if (j.contains("mask-seed")) spec.mask_seed = j["mask-seed"].get<std::uint64_t>();
    if (j.contains("repeats")) spec.repeats = j["repeats"].get<std::size_t>();
    if (j.contains("seed")) {
        if (j["seed"].is_array())
            spec.seeds = j["seed"].get<std::vector<std::uint64_t>>();
        else
            spec.seeds = {j["seed"].get<std::uint64_t>()};
    }
    if (j.contains("out")) spec.out_dir = j["out"].get<std::string>();
    if (j.contains("include-first-chunk")) spec.include_first_chunk = j["include-first-chunk"].get<bool>();
    if (j.contains("lc-chunk-local")) spec.model.lc_chunk_local = j["lc-chunk-local"].get<bool>();
}

void add_common_options(CLI::App* cmd, RunSpec& spec) {
    auto* dataset = cmd->add_option("--dataset", spec.dataset, "dataset file (ARFF or sparse text)");
    auto* synthetic =
        cmd->add_option("--synthetic", spec.synthetic, "synthetic stream KIND:LABELS:NOISE (A, G, R)");
    dataset->excludes(synthetic);
    synthetic->excludes(dataset);

    cmd->add_option("--format", spec.format, "dataset format: arff or sparse")
        ->check(CLI::IsMember({"arff", "sparse"}));
    cmd->add_option("--features", spec.sparse_features, "feature count (sparse format)");
    cmd->add_option("--labels", spec.sparse_labels, "label count (sparse format)");
    cmd->add_option("--labels-at", spec.labels_at, "label block position in ARFF files")
        ->check(CLI::IsMember({"prefix", "suffix"}));
    cmd->add_option("--label-count", spec.label_count,
                    "ARFF label count override (negative = labels at the end)");
    cmd->add_flag("--streaming-scaling", spec.streaming_scaling,
                  "scale features with running min/max instead of a first pass");

    cmd->add_option("--chunk", spec.chunk, "chunk size (0 = pick by dataset size)");
    cmd->add_option("--instances", spec.instances, "synthetic stream length");
    cmd->add_option("--drift-points", spec.drift_points, "synthetic drift instants")->delimiter(',');
    cmd->add_option("--lc-targets", spec.lc_targets, "per-concept label cardinality targets")
        ->delimiter(',');
    cmd->add_option("--drift-window", spec.drift_window, "gradual drift window fraction");

    cmd->add_option("--ensemble-size", spec.model.ensemble_size, "output layer instances per label");
    cmd->add_option("--df", spec.model.d_f, "feature mapping nodes");
    cmd->add_option("--de", spec.model.d_e, "enhancement nodes");
    cmd->add_option("--lambda", spec.model.lambda, "ridge regularization strength");
    cmd->add_option("--theta", spec.model.theta, "instance accuracy threshold");
    cmd->add_option("--tau", spec.model.tau, "label cardinality threshold for weighting");
    cmd->add_option("--pool", spec.model.pool_size, "removed-instance pool capacity");
    cmd->add_flag("--lc-chunk-local", spec.model.lc_chunk_local,
                  "use per-chunk label cardinality instead of the running value");

    cmd->add_option("--label-fraction", spec.label_fraction,
                    "fraction of labels kept for training, in (0, 1]")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_option("--mask-seed", spec.mask_seed, "seed for the label-dropping mask");
    cmd->add_option("--repeats", spec.repeats, "number of runs when --seed is not a list")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", spec.seeds, "seed or comma-separated seed list")->delimiter(',');
    cmd->add_option("--out", spec.out_dir, "output directory");
    cmd->add_flag("--include-first-chunk", spec.include_first_chunk,
                  "include the cold first chunk in cumulative metrics");
    cmd->add_option("--config", "JSON config file (flags take precedence)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming multi-label classification benchmark runner"};
    app.require_subcommand(1);

    RunSpec run_spec;
    RunSpec ablation_spec;

    try {
        apply_config_file(argc, argv, run_spec);
        apply_config_file(argc, argv, ablation_spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App* run_cmd = app.add_subcommand("run", "prequential evaluation of one configuration");
    add_common_options(run_cmd, run_spec);
    run_cmd->add_option("--variant", run_spec.variant, "model variant")
        ->check(CLI::IsMember({"br", "br-ens", "br-ens-w", "default"}));
    run_cmd->add_option("--dump-arff", run_spec.dump_arff, "export the synthetic stream as ARFF");

    CLI::App* ablation_cmd =
        app.add_subcommand("ablation", "compare br, br-ens, br-ens-w and default on one source");
    add_common_options(ablation_cmd, ablation_spec);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            if (run_spec.dataset.empty() && run_spec.synthetic.empty())
                throw std::invalid_argument("one of --dataset or --synthetic is required");
            return do_run(run_spec);
        }
        if (ablation_spec.dataset.empty() && ablation_spec.synthetic.empty())
            throw std::invalid_argument("one of --dataset or --synthetic is required");
        return do_ablation(ablation_spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
