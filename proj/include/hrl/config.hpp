#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrl/agent.hpp"
#include "hrl/env.hpp"

namespace hrl {

struct ExperimentConfig {
    std::string name = "experiment";
    EnvConfig env;
    AgentConfig agent;
    int episodes = 10000;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::string outdir = "out";

    // stable identity of the environment; comparisons refuse to mix these
    std::string env_signature() const;
};

// window_radius accepts 1, 2 or "full" (a window covering the whole map).
int full_window_radius(const EnvConfig& env);

// Flat key = value format with [env] / [agent] / [run] sections.
// Unknown keys and malformed values are configuration errors.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);
std::string config_to_text(const ExperimentConfig& c);

}  // namespace hrl
