#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hrl/errors.hpp"

namespace hrl {

enum class Action : int { Top = 0, Down = 1, Left = 2, Right = 3 };
constexpr int kNumActions = 4;

// Cell codes used in observation encodings.
enum class Cell : std::uint8_t {
    Empty = 0,
    Wall = 1,  // also out-of-map
    Obstacle = 2,
    Goal1 = 3,
    Goal2 = 4,
    Goal3 = 5,
};
constexpr std::size_t kNumCellCodes = 6;

struct Pos {
    int x = 0, y = 0;
    bool operator==(const Pos&) const = default;
};

enum class LayoutId { Gridworld, FourRooms };

struct GridMap {
    int width = 0, height = 0;
    std::vector<std::uint8_t> walls;  // row-major, 1 = wall
    LayoutId layout = LayoutId::Gridworld;

    bool wall(int x, int y) const {
        if (x < 0 || y < 0 || x >= width || y >= height) return true;
        return walls[static_cast<std::size_t>(y) * width + x] != 0;
    }

    static GridMap gridworld11();
    static GridMap four_rooms11();
    static GridMap open_room(int width, int height);  // bordered empty room
    std::vector<Pos> hallways() const;  // four-rooms hallway cells
};

enum class GoalEvent { None, InOrder, OutOfOrder };

struct WorldState {
    Pos agent;
    std::vector<Pos> goals;           // ordered
    std::vector<Pos> obstacles;
    std::vector<bool> goal_collected;  // collected in proper order -> removed from map
    int next_goal = 0;                // index of the next in-order goal
    int steps = 0;
    bool terminal = false;
    // events of the last transition, consumed by the reward functions
    GoalEvent last_goal_event = GoalEvent::None;
    bool entered_obstacle = false;

    bool all_goals_collected() const { return next_goal >= static_cast<int>(goals.size()); }
};

struct Observation {
    int radius = 2;                     // 1 -> 3x3, 2 -> 5x5
    std::vector<std::uint8_t> codes;    // (2r+1)^2 cell codes, agent-centred
    std::vector<std::uint8_t> onehot;   // (2r+1)^2 * kNumCellCodes

    std::size_t window_side() const { return static_cast<std::size_t>(2 * radius + 1); }
};

// One subgoal per goal object; index order matches WorldState::goals.
struct SubgoalDescriptor {
    int goal_index = 0;
    Pos cell;
};
using SubgoalSet = std::vector<SubgoalDescriptor>;

struct EnvConfig {
    LayoutId layout = LayoutId::Gridworld;
    int num_goals = 2;
    int num_obstacles = 2;
    int window_radius = 2;  // >= max map dim gives full observability
    int step_limit = 50;
};

struct StepResult {
    Observation obs;
    double env_reward = 0.0;
    bool terminal = false;
};

class GridEnv {
public:
    GridEnv(EnvConfig cfg, std::uint64_t seed);

    Observation reset();
    StepResult step(Action a);

    const WorldState& state() const { return state_; }
    const GridMap& map() const { return map_; }
    const EnvConfig& config() const { return cfg_; }
    const SubgoalSet& subgoals() const { return subgoals_; }
    Observation observe() const { return observe(state_); }
    Observation observe(const WorldState& s) const;
    std::size_t obs_dim() const;

    std::string render() const;  // ASCII map for docs/tests

private:
    EnvConfig cfg_;
    GridMap map_;
    WorldState state_;
    SubgoalSet subgoals_;
    std::mt19937_64 rng_;
    bool has_state_ = false;
};

// Critic: subgoal detection and intrinsic reward.
struct CriticResult {
    bool subgoal_reached = false;
    bool option_terminal = false;  // reached, or the subgoal became unachievable
    double r_in = 0.0;
};
CriticResult critic_evaluate(const WorldState& before, const WorldState& after,
                             const SubgoalDescriptor& active_subgoal);

// Extrinsic reward of the last transition.
double extrinsic_reward(const WorldState& before, const WorldState& after);

}  // namespace hrl
