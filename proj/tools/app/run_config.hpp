#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfhnn/nn.hpp"
#include "tfhnn/propagation.hpp"
#include "tfhnn/synthetic.hpp"
#include "tfhnn/tasks.hpp"

namespace tfhnn::app {

namespace fs = std::filesystem;

enum class Task { node_classification, hyperlink_prediction };

std::string task_flag(Task t);  // "nc" / "hp"
Task parse_task(const std::string& s);

struct RunConfig {
    std::string dataset = "dataset";
    Task task = Task::node_classification;
    std::optional<fs::path> edges;
    std::optional<fs::path> features;
    std::optional<fs::path> labels;
    std::optional<fs::path> propagated;  // directory written by precompute
    fs::path out = "out";
    std::vector<std::uint64_t> seeds;  // empty: 0..9 for nc, 0..4 for hp
    bool inline_precompute = false;

    PropagationConfig propagation;
    TrainConfig train;
    SplitRatios split;
    double negative_alpha = 0.5;
    std::size_t negative_beta = 5;
    std::uint64_t negative_seed = 0;
    std::string aggregation = "mean";
    PlantedConfig generate;
    std::size_t verify_cases = 50;

    std::vector<std::uint64_t> resolved_seeds() const;
    void validate() const;  // ConfigError
};

// Applies a JSON document on top of `base`. Unknown keys and ill-typed values
// throw ConfigError; relative paths resolve against `base_dir`.
RunConfig apply_config_json(RunConfig base, const nlohmann::json& doc, const fs::path& base_dir);
RunConfig load_run_config(const fs::path& path, RunConfig base = {});

// Canonical form of every setting that can change results (the output
// directory is excluded).
nlohmann::ordered_json canonical_json(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace tfhnn::app
