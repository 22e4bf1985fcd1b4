#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <string>

#include "tfhnn/errors.hpp"
#include "tfhnn/expansion.hpp"
#include "tfhnn/report.hpp"
#include "tfhnn/verify.hpp"

namespace tfhnn::app {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const fs::path& require_path(const std::optional<fs::path>& p, const std::string& key) {
    if (!p) throw ConfigError("config is missing '" + key + "'");
    if (!fs::exists(*p)) throw IoError(key + " path does not exist: " + p->string());
    return *p;
}

struct Inputs {
    Hypergraph h;
    FeatureMatrix x;
    std::optional<LabelVector> labels;
    std::optional<HyperlinkDataset> links;
};

Inputs load_inputs(const RunConfig& cfg) {
    Inputs in;
    in.x = load_matrix(require_path(cfg.features, "features"));
    in.h = load_hypergraph(require_path(cfg.edges, "edges"));
    if (in.h.num_nodes() < in.x.rows()) {
        in.h = Hypergraph(in.x.rows(), in.h.edge_lists());
    } else if (in.h.num_nodes() > in.x.rows()) {
        throw DimensionError("hypergraph has " + std::to_string(in.h.num_nodes()) + " nodes but features have " +
                             std::to_string(in.x.rows()) + " rows");
    }
    if (cfg.task == Task::node_classification) {
        in.labels = load_labels(require_path(cfg.labels, "labels"));
        if (in.labels->size() != in.x.rows())
            throw DimensionError("labels have " + std::to_string(in.labels->size()) + " entries but features have " +
                                 std::to_string(in.x.rows()) + " rows");
    } else {
        in.links = negative_sample(in.h, cfg.negative_alpha, cfg.negative_beta, cfg.negative_seed);
    }
    return in;
}

Split split_for(const RunConfig& cfg, const Inputs& in, std::uint64_t seed) {
    if (cfg.task == Task::node_classification) return make_node_split(*in.labels, cfg.split, seed);
    return make_split(in.links->positives.size(), cfg.split, seed);
}

// Structure that message passing may see for this split.
Hypergraph visible_structure(const RunConfig& cfg, const Inputs& in, const Split& split) {
    if (cfg.task == Task::node_classification) return in.h;
    return message_passing_hypergraph(*in.links, split);
}

std::string seed_suffix(std::uint64_t seed) { return "_seed" + std::to_string(seed); }

fs::path propagated_file(const fs::path& dir, Task task, std::uint64_t seed) {
    if (task == Task::node_classification) return dir / "propagated.tfhn";
    return dir / ("propagated" + seed_suffix(seed) + ".tfhn");
}

fs::path model_file(const fs::path& dir, std::uint64_t seed) {
    return dir / ("model" + seed_suffix(seed) + ".tfck");
}

struct Prepared {
    PropagatedFeatures features;
    double preprocess_seconds = 0.0;
};

Prepared precompute_now(const Hypergraph& visible, const FeatureMatrix& x, const PropagationConfig& pc) {
    const auto t0 = Clock::now();
    const SparseAdjacency a = propagation_adjacency(visible);
    PropagatedFeatures pf = propagate(a, x, pc);
    return {std::move(pf), seconds_since(t0)};
}

// Preprocessing times recorded by a previous precompute run, keyed by seed
// (node classification uses a single record under seed 0).
std::map<std::uint64_t, double> recorded_preprocess_times(const fs::path& dir) {
    std::map<std::uint64_t, double> times;
    std::ifstream in(dir / "precompute.jsonl");
    std::string line;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("timing")) continue;
        times[j.value("seed", std::uint64_t{0})] = j["timing"].value("preprocess_seconds", 0.0);
    }
    return times;
}

Prepared obtain_features(const RunConfig& cfg, const Inputs& in, const Split& split, std::uint64_t seed) {
    const Hypergraph visible = visible_structure(cfg, in, split);
    if (cfg.inline_precompute) return precompute_now(visible, in.x, cfg.propagation);
    if (!cfg.propagated)
        throw IoError("no precomputed features: set 'propagated' to a precompute output directory or pass "
                      "--inline-precompute");
    const fs::path file = propagated_file(*cfg.propagated, cfg.task, seed);
    if (!fs::exists(file)) throw IoError("missing precomputed features " + file.string());
    Prepared p;
    p.features = load_propagated(file);
    const auto& pc = p.features.config;
    if (pc.layers != cfg.propagation.layers || pc.alpha != cfg.propagation.alpha)
        throw IoError(file.string() + " was propagated with different layers/alpha");
    if (p.features.provenance.features_hash != hash_matrix(in.x))
        throw IoError(file.string() + " was propagated from different input features");
    if (p.features.provenance.adjacency_hash != propagation_adjacency(visible).content_hash())
        throw IoError(file.string() + " was propagated over a different hypergraph");
    const auto times = recorded_preprocess_times(*cfg.propagated);
    const auto key = cfg.task == Task::node_classification ? std::uint64_t{0} : seed;
    if (auto it = times.find(key); it != times.end()) p.preprocess_seconds = it->second;
    return p;
}

TrainConfig train_config_for(const RunConfig& cfg, std::uint64_t seed) {
    TrainConfig tc = cfg.train;
    tc.seed = seed;
    return tc;
}

TrainResult run_training(const RunConfig& cfg, const Inputs& in, const PropagatedFeatures& pf,
                         const Split& split, std::uint64_t seed) {
    const TrainConfig tc = train_config_for(cfg, seed);
    if (cfg.task == Task::node_classification) return train_node_classifier(pf, *in.labels, split, tc);
    return train_hyperlink_predictor(pf, *in.links, split, tc);
}

class Sink {
public:
    Sink(std::ostream& console, const fs::path& file) : console_(console), file_(file) {
        if (!file_) throw IoError("cannot write " + file.string());
    }
    void emit(const ordered_json& j) {
        write_jsonl(console_, j);
        write_jsonl(file_, j);
    }

private:
    std::ostream& console_;
    std::ofstream file_;
};

fs::path prepare_out(const RunConfig& cfg) {
    fs::create_directories(cfg.out);
    return cfg.out;
}

ordered_json metric_json(Task task, const Metrics& m) {
    ordered_json j;
    if (task == Task::node_classification) j["accuracy"] = *m.accuracy;
    else j["auc"] = *m.auc;
    j["best_epoch"] = m.best_epoch;
    return j;
}

}  // namespace

int cmd_precompute(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Inputs in = load_inputs(cfg);
    const fs::path dir = prepare_out(cfg);
    Sink sink(out, dir / "precompute.jsonl");
    const std::vector<std::uint64_t> seeds =
        cfg.task == Task::node_classification ? std::vector<std::uint64_t>{0} : cfg.resolved_seeds();
    for (std::uint64_t seed : seeds) {
        const Split split = split_for(cfg, in, seed);
        const Prepared p = precompute_now(visible_structure(cfg, in, split), in.x, cfg.propagation);
        const fs::path file = propagated_file(dir, cfg.task, seed);
        save_propagated(file, p.features);

        ordered_json j;
        j["kind"] = "precompute";
        j["dataset"] = cfg.dataset;
        j["task"] = task_flag(cfg.task);
        if (cfg.task == Task::hyperlink_prediction) j["seed"] = seed;
        j["file"] = file.filename().string();
        j["provenance"] = hex64(p.features.provenance.combined(p.features.config));
        j["features_hash"] = hex64(p.features.provenance.features_hash);
        j["adjacency_hash"] = hex64(p.features.provenance.adjacency_hash);
        j["layers"] = p.features.config.layers;
        j["alpha"] = p.features.config.alpha;
        j["timing"] = {{"preprocess_seconds", p.preprocess_seconds}};
        sink.emit(j);
    }
    return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Inputs in = load_inputs(cfg);
    const fs::path dir = prepare_out(cfg);
    Sink sink(out, dir / "train.jsonl");
    const std::uint64_t hash = config_hash(cfg);
    std::vector<RunRecord> runs;
    for (std::uint64_t seed : cfg.resolved_seeds()) {
        const Split split = split_for(cfg, in, seed);
        const Prepared p = obtain_features(cfg, in, split, seed);
        const TrainResult r = run_training(cfg, in, p.features, split, seed);
        save_checkpoint(model_file(dir, seed), r.params);

        RunRecord rec{cfg.dataset, task_flag(cfg.task), seed, hash, r.metrics.accuracy, r.metrics.auc,
                      r.metrics.best_epoch, r.metrics.train_seconds, p.preprocess_seconds};
        sink.emit(record_json(rec));
        runs.push_back(std::move(rec));
    }
    sink.emit(aggregate_json(runs));
    return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Inputs in = load_inputs(cfg);
    const fs::path dir = prepare_out(cfg);
    Sink sink(out, dir / "evaluate.jsonl");
    const std::uint64_t hash = config_hash(cfg);
    std::vector<double> values;
    for (std::uint64_t seed : cfg.resolved_seeds()) {
        const fs::path model = model_file(dir, seed);
        if (!fs::exists(model)) throw IoError("missing trained model " + model.string());
        const MlpParams params = load_checkpoint(model);
        const Split split = split_for(cfg, in, seed);
        const Prepared p = obtain_features(cfg, in, split, seed);
        if (params.in_dim() != p.features.matrix.cols())
            throw DimensionError(model.string() + " expects " + std::to_string(params.in_dim()) + " input features");

        ordered_json j;
        j["kind"] = "evaluation";
        j["dataset"] = cfg.dataset;
        j["task"] = task_flag(cfg.task);
        j["seed"] = seed;
        j["config_hash"] = hex64(hash);
        Rng unused(0);
        if (cfg.task == Task::node_classification) {
            const ScopedLabels scoped(*in.labels, split);
            const DenseMatrix logits = mlp_forward(params, p.features.matrix, 0.0, Mode::eval, unused);
            values.push_back(scoped.test_accuracy(argmax_rows(logits, split.test)));
            j["accuracy"] = values.back();
        } else {
            const CandidateSet test = candidates_for(*in.links, split.test);
            const DenseMatrix scores =
                mlp_forward(params, aggregate_candidates(p.features.matrix, test.members), 0.0, Mode::eval, unused);
            values.push_back(auc(scores.data(), test.targets));
            j["auc"] = values.back();
        }
        sink.emit(j);
    }
    const Summary s = summarize(values);
    ordered_json agg;
    agg["kind"] = "aggregate";
    agg["dataset"] = cfg.dataset;
    agg["task"] = task_flag(cfg.task);
    agg["config_hash"] = hex64(hash);
    agg[cfg.task == Task::node_classification ? "accuracy" : "auc"] = {
        {"mean", s.mean}, {"std", s.stddev}, {"count", s.count}};
    sink.emit(agg);
    return kExitOk;
}

int cmd_benchmark(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Inputs in = load_inputs(cfg);
    const fs::path dir = prepare_out(cfg);
    Sink sink(out, dir / "benchmark.jsonl");
    const std::uint64_t hash = config_hash(cfg);
    const char* metric = cfg.task == Task::node_classification ? "accuracy" : "auc";
    std::vector<double> tf_values, raw_values, ratios;
    for (std::uint64_t seed : cfg.resolved_seeds()) {
        const Split split = split_for(cfg, in, seed);
        const Prepared p = obtain_features(cfg, in, split, seed);
        // Same head on unpropagated features: zero layers keeps X as is while
        // carrying the provenance of this split's visible structure.
        const Prepared raw = precompute_now(visible_structure(cfg, in, split), in.x, {0, cfg.propagation.alpha});
        const TrainResult tf = run_training(cfg, in, p.features, split, seed);
        const TrainResult base = run_training(cfg, in, raw.features, split, seed);

        const double ratio = tf.metrics.train_seconds > 0.0
                                 ? relative_time(base.metrics.train_seconds, tf.metrics.train_seconds)
                                 : 0.0;
        tf_values.push_back(metric_json(cfg.task, tf.metrics)[metric].get<double>());
        raw_values.push_back(metric_json(cfg.task, base.metrics)[metric].get<double>());
        ratios.push_back(ratio);

        ordered_json j;
        j["kind"] = "benchmark";
        j["dataset"] = cfg.dataset;
        j["task"] = task_flag(cfg.task);
        j["seed"] = seed;
        j["config_hash"] = hex64(hash);
        j["tfhnn"] = metric_json(cfg.task, tf.metrics);
        j["raw_mlp"] = metric_json(cfg.task, base.metrics);
        j["timing"] = {{"preprocess_seconds", p.preprocess_seconds},
                       {"tfhnn_train_seconds", tf.metrics.train_seconds},
                       {"raw_mlp_train_seconds", base.metrics.train_seconds},
                       {"raw_mlp_relative_time", ratio}};
        sink.emit(j);
    }
    auto summary = [](const std::vector<double>& v) {
        const Summary s = summarize(v);
        return ordered_json{{"mean", s.mean}, {"std", s.stddev}, {"count", s.count}};
    };
    ordered_json agg;
    agg["kind"] = "aggregate";
    agg["dataset"] = cfg.dataset;
    agg["task"] = task_flag(cfg.task);
    agg["config_hash"] = hex64(hash);
    agg["tfhnn"] = {{metric, summary(tf_values)}};
    agg["raw_mlp"] = {{metric, summary(raw_values)}};
    agg["timing"] = {{"raw_mlp_relative_time", summary(ratios)}};
    sink.emit(agg);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::uint64_t seed, std::ostream& out) {
    bool all_ok = true;
    for (const PropertyTally& t : verify_all(cfg.verify_cases, seed)) {
        ordered_json j;
        j["kind"] = "verify";
        j["property"] = t.name;
        j["checks"] = t.checks;
        j["failures"] = t.failures;
        j["worst"] = t.worst;
        j["tolerance"] = t.tolerance;
        j["ok"] = t.ok();
        write_jsonl(out, j);
        all_ok = all_ok && t.ok();
    }
    return all_ok ? kExitOk : kExitVerify;
}

int cmd_generate(const RunConfig& cfg, std::uint64_t seed, std::ostream& out) {
    PlantedConfig pc = cfg.generate;
    pc.seed = seed;
    const PlantedInstance inst = generate_planted(pc);
    const fs::path dir = prepare_out(cfg);
    const std::string suffix = seed_suffix(seed);
    const fs::path edges = dir / ("edges" + suffix + ".txt");
    const fs::path features = dir / ("features" + suffix + ".tfhn");
    const fs::path labels = dir / ("labels" + suffix + ".txt");
    save_hypergraph(edges, inst.hypergraph);
    save_matrix(features, inst.features);
    save_labels(labels, inst.labels);

    ordered_json j;
    j["kind"] = "generate";
    j["seed"] = seed;
    j["nodes"] = inst.hypergraph.num_nodes();
    j["hyperedges"] = inst.hypergraph.num_edges();
    j["classes"] = inst.labels.num_classes;
    j["feature_dim"] = inst.features.cols();
    j["edges"] = edges.string();
    j["features"] = features.string();
    j["labels"] = labels.string();
    write_jsonl(out, j);
    return kExitOk;
}

}  // namespace tfhnn::app
