#pragma once

#include <cstdint>
#include <ostream>

#include "run_config.hpp"

namespace tfhnn::app {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitVerify = 3;

// Each command writes its records to `out` (one JSON object per line) and
// mirrors them into files under cfg.out. Return value is the exit code.
int cmd_precompute(const RunConfig& cfg, std::ostream& out);
int cmd_train(const RunConfig& cfg, std::ostream& out);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out);
int cmd_benchmark(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::uint64_t seed, std::ostream& out);
int cmd_generate(const RunConfig& cfg, std::uint64_t seed, std::ostream& out);

}  // namespace tfhnn::app
