#pragma once

#include <string>

#include "config.hpp"

namespace torusrev::cli {

struct CommandContext {
    std::string out_dir = ".";
    int threads = 0;  // 0 = hardware count
};

int cmd_evolve(const ExperimentConfig& cfg, const CommandContext& ctx);
int cmd_husimi(const ExperimentConfig& cfg, const CommandContext& ctx);
int cmd_converge(const ExperimentConfig& cfg, const CommandContext& ctx);
int cmd_limit_eval(const ExperimentConfig& cfg, const CommandContext& ctx);
int cmd_revival_scan(const ExperimentConfig& cfg, const CommandContext& ctx);

// Loads the config and runs the command under the exit-code contract:
// 0 success, 2 configuration/validation error, 3 numerical-tolerance failure.
int run_guarded(int (*cmd)(const ExperimentConfig&, const CommandContext&),
                const std::string& config_path, const CommandContext& ctx);

} // namespace torusrev::cli
