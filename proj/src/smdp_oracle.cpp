#include "hrl/smdp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace hrl {

TabularMDP TabularMDP::deterministic(int num_states, int num_actions) {
    TabularMDP m;
    m.num_states = num_states;
    m.num_actions = num_actions;
    m.trans.assign(num_states, std::vector<std::vector<Outcome>>(
                                   num_actions, {{0, 1.0}}));
    m.reward.assign(num_states, std::vector<double>(num_actions, 0.0));
    m.terminal.assign(num_states, false);
    return m;
}

int TabularMDP::sample_next(int s, int a, std::mt19937_64& rng) const {
    const auto& outs = trans[s][a];
    if (outs.size() == 1) return outs[0].next;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng), acc = 0.0;
    for (const auto& o : outs) {
        acc += o.prob;
        if (u <= acc) return o.next;
    }
    return outs.back().next;
}

// Option terminates at states where beta fires or the MDP is terminal.
static double beta_eff(const TabularMDP& mdp, const TabularOption& opt, int s) {
    return mdp.terminal[s] ? 1.0 : opt.beta[s];
}

OptionModel compute_option_model(const TabularMDP& mdp, const TabularOption& option,
                                 double gamma, int max_iters, double tol) {
    int n = mdp.num_states;
    OptionModel m;
    m.R.assign(n, 0.0);
    m.P.assign(n, std::vector<double>(n, 0.0));

    for (int it = 0; it < max_iters; ++it) {
        double delta = 0.0;
        std::vector<double> R2(n, 0.0);
        std::vector<std::vector<double>> P2(n, std::vector<double>(n, 0.0));
        for (int s = 0; s < n; ++s) {
            if (mdp.terminal[s]) continue;
            int a = option.policy[s];
            double r = mdp.reward[s][a];
            R2[s] = r;
            for (const auto& o : mdp.trans[s][a]) {
                double b = beta_eff(mdp, option, o.next);
                R2[s] += gamma * o.prob * (1.0 - b) * m.R[o.next];
                double w = gamma * o.prob;
                P2[s][o.next] += w * b;
                if (b < 1.0)
                    for (int t = 0; t < n; ++t)
                        P2[s][t] += w * (1.0 - b) * m.P[o.next][t];
            }
            delta = std::max(delta, std::abs(R2[s] - m.R[s]));
            for (int t = 0; t < n; ++t)
                delta = std::max(delta, std::abs(P2[s][t] - m.P[s][t]));
        }
        m.R = std::move(R2);
        m.P = std::move(P2);
        if (delta < tol) return m;
    }
    throw divergence_error("compute_option_model: no fixed point after " +
                           std::to_string(max_iters) + " iterations (non-terminating option?)");
}

OptionModelMC monte_carlo_option_model(const TabularMDP& mdp, const TabularOption& option,
                                       double gamma, int samples, std::uint64_t seed,
                                       int horizon_cap) {
    int n = mdp.num_states;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    OptionModelMC mc;
    mc.R.assign(n, 0.0);
    mc.R_stderr.assign(n, 0.0);
    mc.P.assign(n, std::vector<double>(n, 0.0));
    mc.P_stderr.assign(n, std::vector<double>(n, 0.0));

    for (int s0 = 0; s0 < n; ++s0) {
        if (mdp.terminal[s0]) continue;
        double sum_r = 0.0, sum_r2 = 0.0;
        std::vector<double> sum_p(n, 0.0), sum_p2(n, 0.0);
        for (int i = 0; i < samples; ++i) {
            int s = s0;
            double ret = 0.0, disc = 1.0;
            int end = -1;
            for (int step = 0; step < horizon_cap; ++step) {
                int a = option.policy[s];
                ret += disc * mdp.reward[s][a];
                disc *= gamma;
                s = mdp.sample_next(s, a, rng);
                if (unit(rng) < beta_eff(mdp, option, s)) {
                    end = s;
                    break;
                }
            }
            sum_r += ret;
            sum_r2 += ret * ret;
            if (end >= 0) {
                sum_p[end] += disc;  // disc == gamma^k at termination
                sum_p2[end] += disc * disc;
            }
        }
        double ns = samples;
        mc.R[s0] = sum_r / ns;
        mc.R_stderr[s0] =
            std::sqrt(std::max(0.0, sum_r2 / ns - mc.R[s0] * mc.R[s0]) / ns);
        for (int t = 0; t < n; ++t) {
            mc.P[s0][t] = sum_p[t] / ns;
            mc.P_stderr[s0][t] =
                std::sqrt(std::max(0.0, sum_p2[t] / ns - mc.P[s0][t] * mc.P[s0][t]) / ns);
        }
    }
    return mc;
}

std::vector<double> svi(const TabularMDP& mdp, const std::vector<TabularOption>& options,
                        double gamma, double tol, int max_sweeps) {
    int n = mdp.num_states;
    std::vector<OptionModel> models;
    models.reserve(options.size());
    for (const auto& o : options) models.push_back(compute_option_model(mdp, o, gamma));

    std::vector<double> v(n, 0.0);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double delta = 0.0;
        std::vector<double> v2(n, 0.0);
        for (int s = 0; s < n; ++s) {
            if (mdp.terminal[s]) continue;
            double best = -1e300;
            bool any = false;
            for (std::size_t k = 0; k < options.size(); ++k) {
                if (!options[k].can_start(s)) continue;
                any = true;
                double q = models[k].R[s];
                for (int t = 0; t < n; ++t) q += models[k].P[s][t] * v[t];
                best = std::max(best, q);
            }
            v2[s] = any ? best : 0.0;
            delta = std::max(delta, std::abs(v2[s] - v[s]));
        }
        v = std::move(v2);
        if (delta < tol) break;
    }
    return v;
}

std::vector<std::vector<double>> svi_q(const TabularMDP& mdp,
                                       const std::vector<TabularOption>& options,
                                       double gamma, double tol) {
    auto v = svi(mdp, options, gamma, tol);
    int n = mdp.num_states;
    std::vector<std::vector<double>> q(n, std::vector<double>(options.size(), 0.0));
    for (std::size_t k = 0; k < options.size(); ++k) {
        auto model = compute_option_model(mdp, options[k], gamma);
        for (int s = 0; s < n; ++s) {
            if (mdp.terminal[s] || !options[k].can_start(s)) continue;
            double val = model.R[s];
            for (int t = 0; t < n; ++t) val += model.P[s][t] * v[t];
            q[s][k] = val;
        }
    }
    return q;
}

std::vector<std::vector<double>> smdp_q_learning(const TabularMDP& mdp,
                                                 const std::vector<TabularOption>& options,
                                                 double gamma, double alpha, int episodes,
                                                 std::uint64_t seed, double epsilon,
                                                 int episode_cap) {
    if (alpha <= 0.0 || alpha > 1.0)
        throw precondition_error("smdp_q_learning: alpha must be in (0,1]");
    int n = mdp.num_states;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> q(n, std::vector<double>(options.size(), 0.0));

    std::vector<int> starts;
    for (int s = 0; s < n; ++s)
        if (!mdp.terminal[s]) {
            for (const auto& o : options)
                if (o.can_start(s)) {
                    starts.push_back(s);
                    break;
                }
        }
    if (starts.empty()) throw precondition_error("smdp_q_learning: no startable state");

    auto greedy = [&](int s) {
        int best = -1;
        for (std::size_t k = 0; k < options.size(); ++k) {
            if (!options[k].can_start(s)) continue;
            if (best < 0 || q[s][k] > q[s][best]) best = static_cast<int>(k);
        }
        return best;
    };
    auto random_option = [&](int s) {
        std::vector<int> avail;
        for (std::size_t k = 0; k < options.size(); ++k)
            if (options[k].can_start(s)) avail.push_back(static_cast<int>(k));
        return avail[rng() % avail.size()];
    };

    for (int ep = 0; ep < episodes; ++ep) {
        int s = starts[rng() % starts.size()];
        int steps = 0;
        while (!mdp.terminal[s] && steps < episode_cap) {
            int k = unit(rng) < epsilon ? random_option(s) : greedy(s);
            const auto& opt = options[k];
            int cur = s;
            double r_total = 0.0, disc = 1.0;
            int dur = 0;
            while (true) {
                int a = opt.policy[cur];
                r_total += disc * mdp.reward[cur][a];
                disc *= gamma;
                dur += 1;
                steps += 1;
                cur = mdp.sample_next(cur, a, rng);
                if (unit(rng) < beta_eff(mdp, opt, cur) || steps >= episode_cap) break;
            }
            double bootstrap = 0.0;
            if (!mdp.terminal[cur]) {
                int g = greedy(cur);
                if (g >= 0) bootstrap = std::pow(gamma, dur) * q[cur][g];
            }
            q[s][k] += alpha * (r_total + bootstrap - q[s][k]);
            s = cur;
        }
    }
    return q;
}

OracleGrid OracleGrid::from_ascii(const std::vector<std::string>& rows) {
    OracleGrid g;
    g.height = static_cast<int>(rows.size());
    g.width = static_cast<int>(rows[0].size());
    g.walls.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            char c = rows[y][x];
            if (c == '#') g.walls[static_cast<std::size_t>(y) * g.width + x] = 1;
            if (c == 'G') g.goal = g.index(x, y);
        }
    if (g.goal < 0) throw config_error("oracle grid has no goal cell 'G'");

    int n = g.width * g.height;
    g.mdp = TabularMDP::deterministic(n, 4);
    const int dx[] = {0, 0, -1, 1}, dy[] = {-1, 1, 0, 0};
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            int s = g.index(x, y);
            for (int a = 0; a < 4; ++a) {
                int nx = x + dx[a], ny = y + dy[a];
                int next = g.wall(nx, ny) ? s : g.index(nx, ny);
                g.mdp.set(s, a, next, next == g.goal && s != g.goal ? 1.0 : 0.0);
            }
        }
    g.mdp.terminal[g.goal] = true;
    return g;
}

TabularOption OracleGrid::goto_option(int target) const {
    int n = width * height;
    std::vector<int> dist(n, -1);
    std::queue<int> bfs;
    dist[target] = 0;
    bfs.push(target);
    const int dx[] = {0, 0, -1, 1}, dy[] = {-1, 1, 0, 0};
    while (!bfs.empty()) {
        int s = bfs.front();
        bfs.pop();
        int x = s % width, y = s / width;
        for (int a = 0; a < 4; ++a) {
            int nx = x + dx[a], ny = y + dy[a];
            if (wall(nx, ny)) continue;
            int t = index(nx, ny);
            if (dist[t] < 0) {
                dist[t] = dist[s] + 1;
                bfs.push(t);
            }
        }
    }
    TabularOption opt;
    opt.initiation.assign(n, false);
    opt.policy.assign(n, 0);
    opt.beta.assign(n, 0.0);
    opt.beta[target] = 1.0;
    for (int s = 0; s < n; ++s) {
        int x = s % width, y = s / width;
        if (wall(x, y) || dist[s] < 0) continue;
        opt.initiation[s] = !mdp.terminal[s];
        for (int a = 0; a < 4; ++a) {
            int nx = x + dx[a], ny = y + dy[a];
            if (!wall(nx, ny) && dist[index(nx, ny)] == dist[s] - 1) {
                opt.policy[s] = a;
                break;  // lowest-index tie-break
            }
        }
    }
    return opt;
}

TabularOption OracleGrid::primitive_option(int action) const {
    int n = width * height;
    TabularOption opt;
    opt.initiation.assign(n, false);
    opt.policy.assign(n, action);
    opt.beta.assign(n, 1.0);
    for (int s = 0; s < n; ++s)
        if (!wall(s % width, s / width) && !mdp.terminal[s]) opt.initiation[s] = true;
    return opt;
}

}  // namespace hrl
