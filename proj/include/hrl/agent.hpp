#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hrl/adam.hpp"
#include "hrl/env.hpp"
#include "hrl/network.hpp"
#include "hrl/replay.hpp"

namespace hrl {

enum class Variant { HdrqnV1, HdrqnV2, Dqn, Drqn, Hdqn };

Variant variant_from_string(const std::string& s);
std::string to_string(Variant v);

struct AgentConfig {
    Variant variant = Variant::HdrqnV2;
    double gamma = 0.99;
    double tau = 0.001;
    double lr = 0.001;
    double eps_start = 1.0;
    double eps_end = 0.1;
    double eps_meta_end = 0.1;  // separate floor; meta exploration is cheap
    double anneal_frac = 0.6;   // fraction of the run over which epsilon decays
    std::size_t batch = 8;
    std::size_t n_sub = 8;
    std::size_t n_meta = 1;
    std::size_t cap_sub = 100000;
    std::size_t cap_meta = 50000;
    std::size_t hidden = 32;
    std::vector<std::size_t> extractor = {64, 64};
    int update_every = 1;          // environment steps between update pairs
    bool meta_gamma_pow_k = true;  // gamma^k bootstrap; false gives the plain-gamma variant
};

struct EpisodeStats {
    double env_reward = 0.0;
    double extrinsic = 0.0;
    double intrinsic = 0.0;
    int steps = 0;
    bool success = false;  // all goals collected in order
    double loss_sub = 0.0;
    double loss_meta = 0.0;
    int sub_updates = 0;
    int meta_updates = 0;
};

// Training-time trace events for the hidden-state reset discipline.
struct TraceEvent {
    enum class Kind { EpisodeStart, OptionStart, Step } kind;
    HiddenState h_meta;
    HiddenState h_sub;
};

// hDRQN v1/v2, hDQN, and the flat DQN/DRQN baselines behind one training
// loop; the variant decides hierarchy, recurrence and the meta input.
class Agent {
public:
    Agent(const AgentConfig& cfg, const GridEnv& env, std::uint64_t seed);

    EpisodeStats run_episode(GridEnv& env, bool learn = true);
    void anneal(int episode, int total_episodes);

    double sub_update();
    double meta_update();

    // Always advances the hidden state, then picks uniformly with
    // probability epsilon, else argmax with lowest-index tie-break.
    std::pair<int, HiddenState> eps_greedy(const ControllerNet& net, const Tensor& input,
                                           const HiddenState& state, double epsilon);

    bool hierarchical() const;
    bool recurrent_sub() const;
    bool recurrent_meta() const;

    Tensor sub_input(const std::vector<std::uint8_t>& obs_onehot, int subgoal) const;

    // Sub hidden state after unrolling the current sub net over an option's
    // inputs from zeros; the zero vector for an empty trace.
    Tensor option_end_hidden(const OptionTrace& t) const;

    const AgentConfig& config() const { return cfg_; }
    ControllerNet& sub_net() { return sub_; }
    ControllerNet& sub_target() { return sub_target_; }
    ControllerNet& meta_net() { return meta_; }
    ControllerNet& meta_target() { return meta_target_; }
    ReplayMemory<SubTransition>& sub_memory() { return mem_sub_; }
    ReplayMemory<MetaTransition>& meta_memory() { return mem_meta_; }
    double eps_meta() const { return eps_meta_; }
    double eps_sub() const { return eps_sub_; }
    std::size_t num_subgoals() const { return num_subgoals_; }

    void save_checkpoint(const std::string& path) const;
    void load_checkpoint(const std::string& path);

    std::function<void(const TraceEvent&)> trace;  // optional instrumentation

private:
    EpisodeStats run_episode_flat(GridEnv& env, bool learn);
    EpisodeStats run_episode_hierarchical(GridEnv& env, bool learn);
    void maybe_update(EpisodeStats& stats, bool learn);

    AgentConfig cfg_;
    std::size_t obs_dim_ = 0;
    std::size_t num_subgoals_ = 0;
    ControllerNet sub_, sub_target_;
    ControllerNet meta_, meta_target_;  // unused for flat variants
    AdamState adam_sub_, adam_meta_;
    ReplayMemory<SubTransition> mem_sub_;
    ReplayMemory<MetaTransition> mem_meta_;
    std::mt19937_64 rng_;
    double eps_meta_ = 1.0, eps_sub_ = 1.0;
    std::uint64_t global_step_ = 0;
};

}  // namespace hrl
