#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "app/run_config.hpp"
#include "tfhnn/errors.hpp"

namespace {

using namespace tfhnn::app;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string task;
    bool inline_precompute = false;
    std::optional<std::size_t> cases;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON run configuration");
    cmd->add_option("--seed", f.seed, "Run a single seed instead of the configured list");
    cmd->add_option("--out", f.out, "Output directory");
}

void add_task(CLI::App* cmd, Flags& f) {
    cmd->add_option("--task", f.task, "nc (node classification) or hp (hyperlink prediction)")
        ->check(CLI::IsMember({"nc", "hp"}));
    cmd->add_flag("--inline-precompute", f.inline_precompute, "Propagate features instead of loading them");
}

// Defaults, then the config file, then flags.
RunConfig resolve(const Flags& f) {
    RunConfig cfg;
    if (!f.config.empty()) cfg = load_run_config(f.config, cfg);
    if (!f.task.empty()) cfg.task = parse_task(f.task);
    if (!f.out.empty()) cfg.out = f.out;
    if (f.seed) cfg.seeds = {*f.seed};
    if (f.inline_precompute) cfg.inline_precompute = true;
    if (f.cases) cfg.verify_cases = *f.cases;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training-free hypergraph neural network toolkit"};
    app.require_subcommand(1);
    Flags flags;

    auto* precompute = app.add_subcommand("precompute", "Propagate features once and store them");
    auto* train = app.add_subcommand("train", "Train the classifier head for every seed");
    auto* evaluate = app.add_subcommand("evaluate", "Score stored models on their test split");
    auto* benchmark = app.add_subcommand("benchmark", "Compare against the same head on raw features");
    auto* verify = app.add_subcommand("verify", "Run the randomised operator property checks");
    auto* generate = app.add_subcommand("generate", "Write a planted-partition dataset");
    for (auto* cmd : {precompute, train, evaluate, benchmark, verify, generate}) add_common(cmd, flags);
    for (auto* cmd : {precompute, train, evaluate, benchmark}) add_task(cmd, flags);
    verify->add_option("--cases", flags.cases, "Random instances per property");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        const RunConfig cfg = resolve(flags);
        const std::uint64_t seed = flags.seed.value_or(0);
        if (precompute->parsed()) return cmd_precompute(cfg, std::cout);
        if (train->parsed()) return cmd_train(cfg, std::cout);
        if (evaluate->parsed()) return cmd_evaluate(cfg, std::cout);
        if (benchmark->parsed()) return cmd_benchmark(cfg, std::cout);
        if (verify->parsed()) return cmd_verify(cfg, seed, std::cout);
        if (generate->parsed()) return cmd_generate(cfg, seed, std::cout);
    } catch (const tfhnn::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
