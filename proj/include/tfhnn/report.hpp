#pragma once
// Line-delimited JSON run records and their aggregates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

namespace tfhnn {

struct RunRecord {
    std::string dataset;
    std::string task;  // "nc" or "hp"
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::optional<double> accuracy;
    std::optional<double> auc;
    std::size_t best_epoch = 0;
    double train_seconds = 0.0;
    double preprocess_seconds = 0.0;
};

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single value
};

Summary summarize(std::span<const double> values);

// Hashes print as 16 hex digits. Timing sits under "timing" so that
// strip_timing() leaves exactly the deterministic payload.
nlohmann::ordered_json record_json(const RunRecord& r);
nlohmann::ordered_json aggregate_json(std::span<const RunRecord> runs);
nlohmann::ordered_json strip_timing(nlohmann::ordered_json record);

std::string hex64(std::uint64_t v);

void write_jsonl(std::ostream& out, const nlohmann::ordered_json& record);

}  // namespace tfhnn
