#include "run_config.hpp"

#include <fstream>
#include <numeric>
#include <set>

#include "tfhnn/dense.hpp"
#include "tfhnn/errors.hpp"

namespace tfhnn::app {

std::string task_flag(Task t) { return t == Task::node_classification ? "nc" : "hp"; }

Task parse_task(const std::string& s) {
    if (s == "nc") return Task::node_classification;
    if (s == "hp") return Task::hyperlink_prediction;
    throw ConfigError("task must be nc or hp, got '" + s + "'");
}

std::vector<std::uint64_t> RunConfig::resolved_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> s(task == Task::node_classification ? 10 : 5);
    std::iota(s.begin(), s.end(), std::uint64_t{0});
    return s;
}

void RunConfig::validate() const {
    try {
        propagation.validate();
        train.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (aggregation != "mean") throw ConfigError("aggregation must be \"mean\"");
    if (!(negative_alpha >= 0.0 && negative_alpha <= 1.0)) throw ConfigError("negatives.alpha must lie in [0,1]");
    if (negative_beta == 0) throw ConfigError("negatives.beta must be positive");
}

namespace {

using nlohmann::json;

class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError(where() + " must be an object");
    }

    template <class F>
    void on(const std::string& key, F&& apply) {
        known_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            apply(*it);
        } catch (const json::exception&) {
            throw ConfigError(where() + "." + key + " has the wrong type");
        }
    }

    template <class T>
    void get(const std::string& key, T& target) {
        on(key, [&](const json& v) {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw ConfigError(where() + "." + key + " must be a boolean");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_unsigned()) throw ConfigError(where() + "." + key + " must be a nonnegative integer");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) throw ConfigError(where() + "." + key + " must be a number");
            } else {
                if (!v.is_string()) throw ConfigError(where() + "." + key + " must be a string");
            }
            target = v.get<T>();
        });
    }

    // Call after every on()/get().
    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!known_.contains(it.key())) throw ConfigError("unknown config key " + where() + "." + it.key());
    }

private:
    std::string where() const { return name_.empty() ? "<root>" : name_; }

    const json& j_;
    std::string name_;
    std::set<std::string> known_;
};

}  // namespace

RunConfig apply_config_json(RunConfig cfg, const nlohmann::json& doc, const fs::path& base_dir) {
    Section root(doc, "");
    auto path_key = [&](const std::string& key, std::optional<fs::path>& target) {
        root.on(key, [&](const json& v) {
            if (!v.is_string()) throw ConfigError(key + " must be a path string");
            fs::path p = v.get<std::string>();
            target = p.is_relative() ? base_dir / p : p;
        });
    };
    root.get("dataset", cfg.dataset);
    root.on("task", [&](const json& v) { cfg.task = parse_task(v.get<std::string>()); });
    path_key("edges", cfg.edges);
    path_key("features", cfg.features);
    path_key("labels", cfg.labels);
    path_key("propagated", cfg.propagated);
    root.on("out", [&](const json& v) {
        fs::path p = v.get<std::string>();
        cfg.out = p.is_relative() ? base_dir / p : p;
    });
    root.on("seeds", [&](const json& v) {
        if (!v.is_array()) throw ConfigError("seeds must be an array");
        cfg.seeds.clear();
        for (const auto& s : v) {
            if (!s.is_number_unsigned()) throw ConfigError("seeds must be nonnegative integers");
            cfg.seeds.push_back(s.get<std::uint64_t>());
        }
    });
    root.get("inline_precompute", cfg.inline_precompute);
    root.get("aggregation", cfg.aggregation);

    root.on("propagation", [&](const json& v) {
        Section s(v, "propagation");
        s.get("layers", cfg.propagation.layers);
        s.get("alpha", cfg.propagation.alpha);
        s.reject_unknown();
    });
    root.on("train", [&](const json& v) {
        Section s(v, "train");
        s.get("learning_rate", cfg.train.learning_rate);
        s.get("dropout", cfg.train.dropout);
        s.get("epochs", cfg.train.epochs);
        s.get("weight_decay", cfg.train.weight_decay);
        s.get("hidden", cfg.train.hidden);
        s.get("num_layers", cfg.train.num_layers);
        s.get("adam_beta1", cfg.train.adam_beta1);
        s.get("adam_beta2", cfg.train.adam_beta2);
        s.get("adam_eps", cfg.train.adam_eps);
        s.reject_unknown();
    });
    root.on("split", [&](const json& v) {
        Section s(v, "split");
        s.get("train", cfg.split.train);
        s.get("val", cfg.split.val);
        s.get("test", cfg.split.test);
        s.reject_unknown();
    });
    root.on("negatives", [&](const json& v) {
        Section s(v, "negatives");
        s.get("alpha", cfg.negative_alpha);
        s.get("beta", cfg.negative_beta);
        s.get("seed", cfg.negative_seed);
        s.reject_unknown();
    });
    root.on("generate", [&](const json& v) {
        Section s(v, "generate");
        s.get("n", cfg.generate.n);
        s.get("m", cfg.generate.m);
        s.get("classes", cfg.generate.classes);
        s.get("min_edge_size", cfg.generate.min_edge_size);
        s.get("max_edge_size", cfg.generate.max_edge_size);
        s.get("p_in", cfg.generate.p_in);
        s.get("feature_dim", cfg.generate.feature_dim);
        s.get("feature_noise", cfg.generate.feature_noise);
        s.reject_unknown();
    });
    root.on("verify", [&](const json& v) {
        Section s(v, "verify");
        s.get("cases", cfg.verify_cases);
        s.reject_unknown();
    });
    root.reject_unknown();
    return cfg;
}

RunConfig load_run_config(const fs::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return apply_config_json(std::move(base), doc, path.parent_path());
}

nlohmann::ordered_json canonical_json(const RunConfig& cfg) {
    auto path_or_null = [](const std::optional<fs::path>& p) -> nlohmann::ordered_json {
        if (!p) return nullptr;
        return p->lexically_normal().generic_string();
    };
    nlohmann::ordered_json j;
    j["dataset"] = cfg.dataset;
    j["task"] = task_flag(cfg.task);
    j["edges"] = path_or_null(cfg.edges);
    j["features"] = path_or_null(cfg.features);
    j["labels"] = path_or_null(cfg.labels);
    j["seeds"] = cfg.resolved_seeds();
    j["aggregation"] = cfg.aggregation;
    j["propagation"] = {{"layers", cfg.propagation.layers}, {"alpha", cfg.propagation.alpha}};
    j["train"] = {{"learning_rate", cfg.train.learning_rate}, {"dropout", cfg.train.dropout},
                  {"epochs", cfg.train.epochs},               {"weight_decay", cfg.train.weight_decay},
                  {"hidden", cfg.train.hidden},               {"num_layers", cfg.train.num_layers},
                  {"adam_beta1", cfg.train.adam_beta1},       {"adam_beta2", cfg.train.adam_beta2},
                  {"adam_eps", cfg.train.adam_eps}};
    j["split"] = {{"train", cfg.split.train}, {"val", cfg.split.val}, {"test", cfg.split.test}};
    if (cfg.task == Task::hyperlink_prediction)
        j["negatives"] = {{"alpha", cfg.negative_alpha}, {"beta", cfg.negative_beta}, {"seed", cfg.negative_seed}};
    return j;
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string text = canonical_json(cfg).dump();
    return fnv1a(std::as_bytes(std::span(text.data(), text.size())));
}

}  // namespace tfhnn::app
