#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hrl/errors.hpp"

namespace hrl {

// Small tabular MDP: explicit transition distributions, per (s,a) reward.
struct TabularMDP {
    struct Outcome {
        int next = 0;
        double prob = 1.0;
    };
    int num_states = 0;
    int num_actions = 0;
    std::vector<std::vector<std::vector<Outcome>>> trans;  // [s][a] -> outcomes
    std::vector<std::vector<double>> reward;               // [s][a]
    std::vector<bool> terminal;

    static TabularMDP deterministic(int num_states, int num_actions);
    void set(int s, int a, int next, double r) {
        trans[s][a] = {{next, 1.0}};
        reward[s][a] = r;
    }
    int sample_next(int s, int a, std::mt19937_64& rng) const;
};

struct TabularOption {
    std::vector<bool> initiation;   // states where the option may start
    std::vector<int> policy;        // state -> action
    std::vector<double> beta;       // termination probability per state

    bool can_start(int s) const { return initiation[s]; }
};

// Discounted option model: expected in-option return R_s and multi-time
// transition weights P_ss' (substochastic under discounting).
struct OptionModel {
    std::vector<double> R;
    std::vector<std::vector<double>> P;
};

OptionModel compute_option_model(const TabularMDP& mdp, const TabularOption& option,
                                 double gamma, int max_iters = 100000, double tol = 1e-12);

// Monte-Carlo estimate of the same model, for cross-checks.
struct OptionModelMC {
    std::vector<double> R, R_stderr;
    std::vector<std::vector<double>> P, P_stderr;
};
OptionModelMC monte_carlo_option_model(const TabularMDP& mdp, const TabularOption& option,
                                       double gamma, int samples, std::uint64_t seed,
                                       int horizon_cap = 10000);

// Synchronous value iteration over option models to the optimal V.
std::vector<double> svi(const TabularMDP& mdp, const std::vector<TabularOption>& options,
                        double gamma, double tol = 1e-10, int max_sweeps = 100000);

// Q(s, option) derived from an SVI fixed point.
std::vector<std::vector<double>> svi_q(const TabularMDP& mdp,
                                       const std::vector<TabularOption>& options,
                                       double gamma, double tol = 1e-10);

// Tabular SMDP Q-learning with gamma^k bootstrapping over option durations.
std::vector<std::vector<double>> smdp_q_learning(const TabularMDP& mdp,
                                                 const std::vector<TabularOption>& options,
                                                 double gamma, double alpha, int episodes,
                                                 std::uint64_t seed, double epsilon = 0.2,
                                                 int episode_cap = 1000);

// Deterministic gridworld helpers for bundled oracle domains.
struct OracleGrid {
    int width = 0, height = 0;
    std::vector<std::uint8_t> walls;
    int goal = -1;  // absorbing state index
    TabularMDP mdp;

    int index(int x, int y) const { return y * width + x; }
    bool wall(int x, int y) const {
        if (x < 0 || y < 0 || x >= width || y >= height) return true;
        return walls[static_cast<std::size_t>(y) * width + x] != 0;
    }

    // 4-action deterministic grid; reward 1 on entering the goal, which
    // is absorbing.
    static OracleGrid from_ascii(const std::vector<std::string>& rows);
    // option whose policy walks the shortest path to `target` and
    // terminates there (binary beta)
    TabularOption goto_option(int target) const;
    TabularOption primitive_option(int action) const;
};

}  // namespace hrl
