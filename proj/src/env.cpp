#include "hrl/env.hpp"

#include <algorithm>
#include <queue>

namespace hrl {

static std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

GridMap GridMap::open_room(int width, int height) {
    GridMap m;
    m.width = width;
    m.height = height;
    m.layout = LayoutId::Gridworld;
    m.walls.assign(static_cast<std::size_t>(width) * height, 0);
    for (int x = 0; x < width; ++x) {
        m.walls[x] = 1;
        m.walls[static_cast<std::size_t>(height - 1) * width + x] = 1;
    }
    for (int y = 0; y < height; ++y) {
        m.walls[static_cast<std::size_t>(y) * width] = 1;
        m.walls[static_cast<std::size_t>(y) * width + width - 1] = 1;
    }
    return m;
}

GridMap GridMap::gridworld11() { return open_room(11, 11); }

// 11x11 bordered map split by walls at x=5 and y=5, one hallway per
// adjacent room pair: (5,2), (5,8), (2,5), (8,5).
GridMap GridMap::four_rooms11() {
    GridMap m = open_room(11, 11);
    m.layout = LayoutId::FourRooms;
    for (int y = 1; y < 10; ++y) m.walls[static_cast<std::size_t>(y) * 11 + 5] = 1;
    for (int x = 1; x < 10; ++x) m.walls[static_cast<std::size_t>(5) * 11 + x] = 1;
    for (Pos p : m.hallways()) m.walls[static_cast<std::size_t>(p.y) * 11 + p.x] = 0;
    return m;
}

std::vector<Pos> GridMap::hallways() const {
    if (layout != LayoutId::FourRooms) return {};
    return {{5, 2}, {5, 8}, {2, 5}, {8, 5}};
}

GridEnv::GridEnv(EnvConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {
    if (cfg.num_goals < 2 || cfg.num_goals > 3)
        throw config_error("num_goals must be 2 or 3, got " + std::to_string(cfg.num_goals));
    if (cfg.window_radius < 1) throw config_error("window_radius must be >= 1");
    map_ = cfg.layout == LayoutId::FourRooms ? GridMap::four_rooms11()
                                             : GridMap::gridworld11();
}

std::size_t GridEnv::obs_dim() const {
    std::size_t side = static_cast<std::size_t>(2 * cfg_.window_radius + 1);
    return side * side * kNumCellCodes;
}

Observation GridEnv::reset() {
    std::vector<Pos> free_cells;
    for (int y = 0; y < map_.height; ++y)
        for (int x = 0; x < map_.width; ++x)
            if (!map_.wall(x, y)) free_cells.push_back({x, y});

    std::size_t needed = static_cast<std::size_t>(1 + cfg_.num_goals + cfg_.num_obstacles);
    if (free_cells.size() < needed)
        throw config_error("map too small: " + std::to_string(free_cells.size()) +
                           " free cells, need " + std::to_string(needed));

    // full Fisher-Yates, then take agent and goals from the front and
    // obstacles from the first non-hallway cells after them
    std::vector<Pos> cells = free_cells;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        std::size_t j = i + uniform_index(rng_, cells.size() - i);
        std::swap(cells[i], cells[j]);
    }
    auto hall = map_.hallways();
    auto on_hallway = [&](Pos p) {
        return std::find(hall.begin(), hall.end(), p) != hall.end();
    };

    state_ = WorldState{};
    state_.agent = cells[0];
    for (int i = 0; i < cfg_.num_goals; ++i) state_.goals.push_back(cells[1 + i]);
    // obstacles keep off the four-rooms hallway cells
    for (std::size_t i = 1 + cfg_.num_goals;
         i < cells.size() && static_cast<int>(state_.obstacles.size()) < cfg_.num_obstacles;
         ++i)
        if (!on_hallway(cells[i])) state_.obstacles.push_back(cells[i]);
    if (static_cast<int>(state_.obstacles.size()) < cfg_.num_obstacles)
        throw config_error("cannot place obstacles off hallways");
    state_.goal_collected.assign(cfg_.num_goals, false);

    // flood fill from the agent; every goal must be reachable
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(map_.width) * map_.height, 0);
    std::queue<Pos> q;
    q.push(state_.agent);
    seen[static_cast<std::size_t>(state_.agent.y) * map_.width + state_.agent.x] = 1;
    while (!q.empty()) {
        Pos p = q.front();
        q.pop();
        const int dx[] = {0, 0, -1, 1}, dy[] = {-1, 1, 0, 0};
        for (int d = 0; d < 4; ++d) {
            Pos n{p.x + dx[d], p.y + dy[d]};
            if (map_.wall(n.x, n.y)) continue;
            auto idx = static_cast<std::size_t>(n.y) * map_.width + n.x;
            if (!seen[idx]) {
                seen[idx] = 1;
                q.push(n);
            }
        }
    }
    for (Pos g : state_.goals)
        if (!seen[static_cast<std::size_t>(g.y) * map_.width + g.x])
            throw config_error("unreachable goal in generated layout");

    subgoals_.clear();
    for (int i = 0; i < cfg_.num_goals; ++i)
        subgoals_.push_back({i, state_.goals[i]});

    has_state_ = true;
    return observe();
}

Observation GridEnv::observe(const WorldState& s) const {
    Observation obs;
    obs.radius = cfg_.window_radius;
    std::size_t side = obs.window_side();
    obs.codes.assign(side * side, static_cast<std::uint8_t>(Cell::Wall));
    for (int wy = 0; wy < static_cast<int>(side); ++wy)
        for (int wx = 0; wx < static_cast<int>(side); ++wx) {
            int x = s.agent.x + wx - cfg_.window_radius;
            int y = s.agent.y + wy - cfg_.window_radius;
            Cell c = Cell::Wall;
            if (!map_.wall(x, y)) {
                c = Cell::Empty;
                for (const Pos& o : s.obstacles)
                    if (o == Pos{x, y}) c = Cell::Obstacle;
                for (std::size_t i = 0; i < s.goals.size(); ++i)
                    if (s.goals[i] == Pos{x, y} && !s.goal_collected[i])
                        c = static_cast<Cell>(static_cast<int>(Cell::Goal1) + i);
            }
            obs.codes[static_cast<std::size_t>(wy) * side + wx] = static_cast<std::uint8_t>(c);
        }
    obs.onehot.assign(side * side * kNumCellCodes, 0);
    for (std::size_t i = 0; i < obs.codes.size(); ++i)
        obs.onehot[i * kNumCellCodes + obs.codes[i]] = 1;
    return obs;
}

StepResult GridEnv::step(Action a) {
    if (!has_state_) throw precondition_error("step before reset");
    if (state_.terminal) throw precondition_error("step after terminal state");

    Pos from = state_.agent;
    Pos to = from;
    switch (a) {
        case Action::Top: to.y -= 1; break;
        case Action::Down: to.y += 1; break;
        case Action::Left: to.x -= 1; break;
        case Action::Right: to.x += 1; break;
    }
    if (map_.wall(to.x, to.y)) to = from;  // cannot move into a wall

    state_.agent = to;
    state_.last_goal_event = GoalEvent::None;
    state_.entered_obstacle = false;
    bool moved = !(to == from);

    if (moved) {
        for (const Pos& o : state_.obstacles)
            if (o == to) state_.entered_obstacle = true;
        for (std::size_t i = 0; i < state_.goals.size(); ++i) {
            if (state_.goals[i] == to && !state_.goal_collected[i]) {
                if (static_cast<int>(i) == state_.next_goal) {
                    state_.goal_collected[i] = true;
                    state_.next_goal += 1;
                    state_.last_goal_event = GoalEvent::InOrder;
                } else {
                    state_.last_goal_event = GoalEvent::OutOfOrder;
                }
            }
        }
    }

    double reward = 0.0;
    if (state_.entered_obstacle) reward -= 1.0;
    if (state_.last_goal_event == GoalEvent::InOrder) reward += 1.0;
    if (state_.last_goal_event == GoalEvent::OutOfOrder) reward += 0.01;

    state_.steps += 1;
    state_.terminal = state_.all_goals_collected() || state_.steps >= cfg_.step_limit;

    return {observe(), reward, state_.terminal};
}

std::string GridEnv::render() const {
    std::string out;
    for (int y = 0; y < map_.height; ++y) {
        for (int x = 0; x < map_.width; ++x) {
            char c = map_.wall(x, y) ? '#' : '.';
            for (const Pos& o : state_.obstacles)
                if (o == Pos{x, y}) c = 'X';
            for (std::size_t i = 0; i < state_.goals.size(); ++i)
                if (state_.goals[i] == Pos{x, y} && !state_.goal_collected[i])
                    c = static_cast<char>('1' + i);
            if (state_.agent == Pos{x, y}) c = 'A';
            out += c;
        }
        out += '\n';
    }
    return out;
}

CriticResult critic_evaluate(const WorldState& before, const WorldState& after,
                             const SubgoalDescriptor& active_subgoal) {
    CriticResult r;
    // entry semantics, as for obstacles: standing still on the cell does
    // not re-trigger the subgoal. The goal object must still be on the
    // map when the step starts; a collected goal cannot be detected.
    r.subgoal_reached = after.agent == active_subgoal.cell &&
                        !(before.agent == after.agent) &&
                        !before.goal_collected[active_subgoal.goal_index];
    // the termination signal also fires when the commanded goal object has
    // already been collected: the subgoal is unachievable, so the option ends
    // (without reward) instead of consuming the rest of the episode
    r.option_terminal =
        r.subgoal_reached || before.goal_collected[active_subgoal.goal_index];
    if (r.subgoal_reached)
        r.r_in = 1.0;
    else if (after.entered_obstacle)
        r.r_in = -1.0;
    return r;
}

double extrinsic_reward(const WorldState& /*before*/, const WorldState& after) {
    switch (after.last_goal_event) {
        case GoalEvent::InOrder: return 1.0;
        case GoalEvent::OutOfOrder: return 0.01;
        case GoalEvent::None: return 0.0;
    }
    return 0.0;
}

}  // namespace hrl
