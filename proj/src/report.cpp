#include "tfhnn/report.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace tfhnn {

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::ordered_json record_json(const RunRecord& r) {
    nlohmann::ordered_json j;
    j["kind"] = "run";
    j["dataset"] = r.dataset;
    j["task"] = r.task;
    j["seed"] = r.seed;
    j["config_hash"] = hex64(r.config_hash);
    if (r.accuracy) j["accuracy"] = *r.accuracy;
    if (r.auc) j["auc"] = *r.auc;
    j["best_epoch"] = r.best_epoch;
    j["timing"] = {{"train_seconds", r.train_seconds}, {"preprocess_seconds", r.preprocess_seconds}};
    return j;
}

namespace {

nlohmann::ordered_json summary_json(const Summary& s) {
    return {{"mean", s.mean}, {"std", s.stddev}, {"count", s.count}};
}

}  // namespace

nlohmann::ordered_json aggregate_json(std::span<const RunRecord> runs) {
    nlohmann::ordered_json j;
    j["kind"] = "aggregate";
    if (!runs.empty()) {
        j["dataset"] = runs.front().dataset;
        j["task"] = runs.front().task;
        j["config_hash"] = hex64(runs.front().config_hash);
    }
    std::vector<std::uint64_t> seeds;
    std::vector<double> acc, auc_values, train, pre;
    for (const auto& r : runs) {
        seeds.push_back(r.seed);
        if (r.accuracy) acc.push_back(*r.accuracy);
        if (r.auc) auc_values.push_back(*r.auc);
        train.push_back(r.train_seconds);
        pre.push_back(r.preprocess_seconds);
    }
    j["seeds"] = seeds;
    if (!acc.empty()) j["accuracy"] = summary_json(summarize(acc));
    if (!auc_values.empty()) j["auc"] = summary_json(summarize(auc_values));
    j["timing"] = {{"train_seconds", summary_json(summarize(train))},
                   {"preprocess_seconds", summary_json(summarize(pre))}};
    return j;
}

nlohmann::ordered_json strip_timing(nlohmann::ordered_json record) {
    record.erase("timing");
    return record;
}

void write_jsonl(std::ostream& out, const nlohmann::ordered_json& record) {
    out << record.dump() << '\n';
}

}  // namespace tfhnn
