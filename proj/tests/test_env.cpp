#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <queue>
#include <set>

#include "hrl/env.hpp"

using namespace hrl;

namespace {

// drive the agent to a target cell, routing around the cells in `avoid`
// so no goal or obstacle is crossed by accident
void walk_to(GridEnv& env, Pos target, const std::vector<Pos>& avoid = {}) {
    while (!(env.state().agent == target)) {
        Pos a = env.state().agent;
        const GridMap& m = env.map();
        std::vector<int> prev(static_cast<std::size_t>(m.width) * m.height, -1);
        std::vector<int> via(prev.size(), -1);
        auto idx = [&](Pos p) { return static_cast<std::size_t>(p.y) * m.width + p.x; };
        auto blocked = [&](Pos p) {
            return !(p == target) &&
                   std::find(avoid.begin(), avoid.end(), p) != avoid.end();
        };
        std::queue<Pos> q;
        q.push(a);
        prev[idx(a)] = static_cast<int>(idx(a));
        const int dx[] = {0, 0, -1, 1}, dy[] = {-1, 1, 0, 0};
        while (!q.empty()) {
            Pos p = q.front();
            q.pop();
            for (int d = 0; d < 4; ++d) {
                Pos n{p.x + dx[d], p.y + dy[d]};
                if (m.wall(n.x, n.y) || blocked(n) || prev[idx(n)] >= 0) continue;
                prev[idx(n)] = static_cast<int>(idx(p));
                via[idx(n)] = d;
                q.push(n);
            }
        }
        REQUIRE(prev[idx(target)] >= 0);
        // walk back from the target to find the first move
        std::size_t cur = idx(target);
        int first = -1;
        while (cur != idx(a)) {
            first = via[cur];
            cur = static_cast<std::size_t>(prev[cur]);
        }
        env.step(static_cast<Action>(first));
    }
}

}  // namespace

TEST_CASE("maps: borders, interior walls and hallways") {
    GridMap g = GridMap::gridworld11();
    CHECK(g.width == 11);
    CHECK(g.height == 11);
    for (int i = 0; i < 11; ++i) {
        CHECK(g.wall(i, 0));
        CHECK(g.wall(i, 10));
        CHECK(g.wall(0, i));
        CHECK(g.wall(10, i));
    }
    CHECK_FALSE(g.wall(5, 5));
    CHECK(g.wall(-1, 3));  // out of map counts as wall
    CHECK(g.hallways().empty());

    GridMap f = GridMap::four_rooms11();
    CHECK(f.wall(5, 5));
    CHECK(f.wall(5, 3));
    CHECK(f.wall(7, 5));
    for (Pos h : f.hallways()) CHECK_FALSE(f.wall(h.x, h.y));
    CHECK(f.hallways().size() == 4);
    int open = 0;
    for (int y = 0; y < 11; ++y)
        for (int x = 0; x < 11; ++x)
            if (!f.wall(x, y)) ++open;
    CHECK(open == 4 * 16 + 4);  // four 4x4 rooms plus the hallways
}

TEST_CASE("reset: object census, distinctness and determinism") {
    EnvConfig cfg;
    cfg.num_goals = 3;
    cfg.num_obstacles = 2;
    GridEnv env(cfg, 42);
    env.reset();
    const WorldState& s = env.state();
    CHECK(s.goals.size() == 3);
    CHECK(s.obstacles.size() == 2);
    CHECK(env.subgoals().size() == 3);
    CHECK(s.next_goal == 0);
    CHECK(s.steps == 0);

    std::set<std::pair<int, int>> occupied{{s.agent.x, s.agent.y}};
    for (Pos p : s.goals) CHECK(occupied.insert({p.x, p.y}).second);
    for (Pos p : s.obstacles) CHECK(occupied.insert({p.x, p.y}).second);
    for (auto [x, y] : occupied) CHECK_FALSE(env.map().wall(x, y));

    GridEnv env2(cfg, 42);
    env2.reset();
    CHECK(env2.state().agent == s.agent);
    CHECK(env2.state().goals == s.goals);
    CHECK(env2.state().obstacles == s.obstacles);

    GridEnv env3(cfg, 43);
    env3.reset();
    bool differs = !(env3.state().agent == s.agent) || env3.state().goals != s.goals;
    CHECK(differs);
}

TEST_CASE("reset randomizes layouts across episodes of one env") {
    GridEnv env(EnvConfig{}, 7);
    env.reset();
    Pos first = env.state().agent;
    bool moved = false;
    for (int i = 0; i < 20 && !moved; ++i) {
        env.reset();
        moved = !(env.state().agent == first);
    }
    CHECK(moved);
}

TEST_CASE("four-rooms obstacles never sit in a hallway") {
    EnvConfig cfg;
    cfg.layout = LayoutId::FourRooms;
    cfg.num_obstacles = 4;
    GridEnv env(cfg, 3);
    auto hall = env.map().hallways();
    for (int ep = 0; ep < 50; ++ep) {
        env.reset();
        for (Pos o : env.state().obstacles)
            CHECK(std::find(hall.begin(), hall.end(), o) == hall.end());
    }
}

TEST_CASE("step geometry: actions move as labelled and walls block") {
    GridEnv env(EnvConfig{}, 11);
    env.reset();
    Pos a = env.state().agent;
    env.step(Action::Top);
    Pos b = env.state().agent;
    if (env.map().wall(a.x, a.y - 1))
        CHECK(b == a);
    else
        CHECK(b == Pos{a.x, a.y - 1});

    // drive into the left border and keep pushing
    while (env.state().agent.x > 1 && !env.state().terminal) env.step(Action::Left);
    if (!env.state().terminal) {
        Pos edge = env.state().agent;
        auto res = env.step(Action::Left);
        CHECK(env.state().agent == edge);  // wall bump leaves position unchanged
        CHECK(res.env_reward == 0.0);
    }
}

TEST_CASE("step preconditions") {
    GridEnv env(EnvConfig{}, 1);
    CHECK_THROWS_AS(env.step(Action::Top), precondition_error);
    EnvConfig bad;
    bad.num_goals = 4;
    CHECK_THROWS_AS(GridEnv(bad, 1), config_error);
    bad.num_goals = 2;
    bad.window_radius = 0;
    CHECK_THROWS_AS(GridEnv(bad, 1), config_error);
}

TEST_CASE("rewards: in-order +1, out-of-order 0.01, obstacle -1") {
    EnvConfig cfg;
    cfg.num_obstacles = 1;
    cfg.step_limit = 1000;  // generous so scripted walks cannot time out
    GridEnv env(cfg, 5);
    env.reset();
    Pos g0 = env.state().goals[0], g1 = env.state().goals[1];
    Pos obst = env.state().obstacles[0];
    std::vector<Pos> specials{g0, g1, obst};

    // entering the second goal first: 0.01, goal remains, order unchanged
    walk_to(env, g1, specials);
    CHECK(env.state().next_goal == 0);
    CHECK_FALSE(env.state().goal_collected[1]);
    CHECK(env.state().last_goal_event == GoalEvent::OutOfOrder);
    CHECK(extrinsic_reward(env.state(), env.state()) == 0.01);

    // obstacle entry costs 1 once; staying put on it costs nothing more
    walk_to(env, obst, specials);
    CHECK(env.state().entered_obstacle);
    auto res = env.step(Action::Top);
    if (env.state().agent == obst) {  // bumped a wall, still on the obstacle
        CHECK(res.env_reward == 0.0);
        CHECK_FALSE(env.state().entered_obstacle);
    }

    // in-order collection: +1 each, goal disappears, terminal at the last
    walk_to(env, g0, specials);
    CHECK(env.state().last_goal_event == GoalEvent::InOrder);
    CHECK(env.state().goal_collected[0]);
    CHECK(env.state().next_goal == 1);
    CHECK(extrinsic_reward(env.state(), env.state()) == 1.0);
    walk_to(env, g1, specials);
    CHECK(env.state().terminal);
    CHECK(env.state().all_goals_collected());
    CHECK_THROWS_AS(env.step(Action::Top), precondition_error);
}

TEST_CASE("episode ends at the step limit without success") {
    EnvConfig cfg;
    cfg.step_limit = 5;
    GridEnv env(cfg, 9);
    env.reset();
    bool term = false;
    for (int i = 0; i < 5; ++i) {
        // bump the nearest border so no goal is collected by accident
        term = env.step(env.state().agent.x <= 5 ? Action::Left : Action::Right).terminal;
        if (term) break;
    }
    CHECK(term);
    CHECK(env.state().steps <= 5);
}

TEST_CASE("critic: subgoal entry, obstacle penalty, standing still") {
    SubgoalDescriptor sg{1, {5, 5}};

    // direct checks on synthetic states
    WorldState a, b;
    a.agent = {3, 3};
    a.goal_collected = {false, false};
    b = a;
    b.agent = sg.cell;
    CriticResult hit = critic_evaluate(a, b, sg);
    CHECK(hit.subgoal_reached);
    CHECK(hit.option_terminal);
    CHECK(hit.r_in == 1.0);

    // a collected goal object can no longer be detected, but its absence
    // raises the termination signal so the option ends without reward
    WorldState a2 = a;
    a2.goal_collected[1] = true;
    CriticResult gone = critic_evaluate(a2, b, sg);
    CHECK_FALSE(gone.subgoal_reached);
    CHECK(gone.option_terminal);
    CHECK(gone.r_in == 0.0);

    // standing on the cell without moving does not re-trigger it
    WorldState c = b;
    CriticResult stay = critic_evaluate(b, c, sg);
    CHECK_FALSE(stay.subgoal_reached);
    CHECK_FALSE(stay.option_terminal);
    CHECK(stay.r_in == 0.0);

    WorldState d = a, e = a;
    e.agent = {3, 4};
    e.entered_obstacle = true;
    CriticResult pen = critic_evaluate(d, e, sg);
    CHECK_FALSE(pen.subgoal_reached);
    CHECK(pen.r_in == -1.0);

    // wrong-cell arrival is neutral
    WorldState f = a, g = a;
    g.agent = {4, 3};
    CriticResult miss = critic_evaluate(f, g, sg);
    CHECK(miss.r_in == 0.0);
}

TEST_CASE("observation: window shape, one-hot consistency, agent centre") {
    EnvConfig cfg;
    cfg.window_radius = 2;
    GridEnv env(cfg, 23);
    Observation obs = env.reset();
    CHECK(obs.window_side() == 5);
    CHECK(obs.codes.size() == 25);
    CHECK(obs.onehot.size() == 25 * kNumCellCodes);
    for (std::size_t i = 0; i < obs.codes.size(); ++i) {
        std::size_t ones = 0;
        for (std::size_t k = 0; k < kNumCellCodes; ++k)
            ones += obs.onehot[i * kNumCellCodes + k];
        CHECK(ones == 1);
        CHECK(obs.onehot[i * kNumCellCodes + obs.codes[i]] == 1);
    }
    // the centre cell is where the agent stands, never a wall
    CHECK(obs.codes[12] != static_cast<std::uint8_t>(Cell::Wall));
    CHECK(env.obs_dim() == obs.onehot.size());
}

TEST_CASE("observation window translates with the agent") {
    EnvConfig cfg;
    cfg.window_radius = 1;
    cfg.num_obstacles = 0;
    GridEnv env(cfg, 29);
    env.reset();
    // a cell one step right of the agent appears at window slot (1, 2);
    // after moving right it sits at the centre (1, 1)
    Pos a = env.state().agent;
    if (!env.map().wall(a.x + 1, a.y)) {
        Observation before = env.observe();
        std::uint8_t right_of_agent = before.codes[1 * 3 + 2];
        env.step(Action::Right);
        Observation after = env.observe();
        std::uint8_t centre = after.codes[1 * 3 + 1];
        // goals vanish when collected in order, otherwise codes must agree
        if (env.state().last_goal_event == GoalEvent::None)
            CHECK(centre == right_of_agent);
    }
}

TEST_CASE("window nesting: a larger window contains the smaller one") {
    EnvConfig small, big;
    small.window_radius = 1;
    big.window_radius = 3;
    GridEnv es(small, 31), eb(big, 31);
    es.reset();
    eb.reset();  // same seed, same layout
    REQUIRE(es.state().agent == eb.state().agent);
    Observation so = es.observe(), bo = eb.observe();
    for (int wy = 0; wy < 3; ++wy)
        for (int wx = 0; wx < 3; ++wx)
            CHECK(so.codes[wy * 3 + wx] == bo.codes[(wy + 2) * 7 + (wx + 2)]);
}

TEST_CASE("full-observability window covers the whole map from any cell") {
    EnvConfig cfg;
    cfg.window_radius = 9;
    GridEnv env(cfg, 37);
    Observation obs = env.reset();
    CHECK(obs.window_side() == 19);
    // every unconsumed goal must be visible somewhere in the window
    std::size_t goal_cells = 0;
    for (auto c : obs.codes)
        if (c >= static_cast<std::uint8_t>(Cell::Goal1)) ++goal_cells;
    CHECK(goal_cells == env.state().goals.size());
}

TEST_CASE("every goal is reachable from the agent spawn") {
    EnvConfig cfg;
    cfg.layout = LayoutId::FourRooms;
    cfg.num_goals = 3;
    cfg.step_limit = 100;
    GridEnv env(cfg, 41);
    for (int ep = 0; ep < 25; ++ep) {
        env.reset();  // throws if a goal is walled off
        CHECK(env.state().goals.size() == 3);
    }
}

TEST_CASE("render shows agent, goals and obstacles") {
    GridEnv env(EnvConfig{}, 47);
    env.reset();
    std::string r = env.render();
    CHECK(r.find('A') != std::string::npos);
    CHECK(r.find('1') != std::string::npos);
    CHECK(r.find('2') != std::string::npos);
    CHECK(std::count(r.begin(), r.end(), 'X') == 2);
}
