#include "hrl/agent.hpp"

#include <algorithm>
#include <cmath>

#include "hrl/serialize.hpp"

namespace hrl {

Variant variant_from_string(const std::string& s) {
    if (s == "hdrqn_v1") return Variant::HdrqnV1;
    if (s == "hdrqn_v2") return Variant::HdrqnV2;
    if (s == "dqn") return Variant::Dqn;
    if (s == "drqn") return Variant::Drqn;
    if (s == "hdqn") return Variant::Hdqn;
    throw config_error("unknown agent variant '" + s + "'");
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::HdrqnV1: return "hdrqn_v1";
        case Variant::HdrqnV2: return "hdrqn_v2";
        case Variant::Dqn: return "dqn";
        case Variant::Drqn: return "drqn";
        case Variant::Hdqn: return "hdqn";
    }
    return "?";
}

static Tensor bytes_to_tensor(const std::vector<std::uint8_t>& v) {
    Tensor t({v.size()});
    for (std::size_t i = 0; i < v.size(); ++i) t.data[i] = v[i];
    return t;
}

static Tensor doubles_to_tensor(const std::vector<double>& v) {
    return Tensor({v.size()}, v);
}

static int argmax_low(const Tensor& q) {
    return static_cast<int>(std::max_element(q.data.begin(), q.data.end()) - q.data.begin());
}

bool Agent::hierarchical() const {
    return cfg_.variant == Variant::HdrqnV1 || cfg_.variant == Variant::HdrqnV2 ||
           cfg_.variant == Variant::Hdqn;
}

bool Agent::recurrent_sub() const {
    return cfg_.variant == Variant::HdrqnV1 || cfg_.variant == Variant::HdrqnV2 ||
           cfg_.variant == Variant::Drqn;
}

bool Agent::recurrent_meta() const {
    return cfg_.variant == Variant::HdrqnV1 || cfg_.variant == Variant::HdrqnV2;
}

Agent::Agent(const AgentConfig& cfg, const GridEnv& env, std::uint64_t seed)
    : cfg_(cfg),
      mem_sub_(cfg.cap_sub),
      mem_meta_(cfg.cap_meta),
      rng_(seed),
      eps_meta_(cfg.eps_start),
      eps_sub_(cfg.eps_start) {
    if (cfg.gamma <= 0.0 || cfg.gamma >= 1.0) throw config_error("gamma must be in (0,1)");
    obs_dim_ = env.obs_dim();
    num_subgoals_ = static_cast<std::size_t>(env.config().num_goals);

    std::size_t sub_in = obs_dim_ + (hierarchical() ? num_subgoals_ : 0);
    sub_ = ControllerNet::make(sub_in, cfg.extractor, cfg.hidden,
                               static_cast<std::size_t>(kNumActions), recurrent_sub(), rng_);
    sub_target_ = sub_;
    adam_sub_ = AdamState::for_params(sub_.params(), cfg.lr);

    if (hierarchical()) {
        std::size_t meta_in =
            cfg_.variant == Variant::HdrqnV2 ? cfg.hidden : obs_dim_;
        meta_ = ControllerNet::make(meta_in, cfg.extractor, cfg.hidden, num_subgoals_,
                                    recurrent_meta(), rng_);
        meta_target_ = meta_;
        adam_meta_ = AdamState::for_params(meta_.params(), cfg.lr);
    }
}

Tensor Agent::sub_input(const std::vector<std::uint8_t>& obs_onehot, int subgoal) const {
    if (!hierarchical()) return bytes_to_tensor(obs_onehot);
    Tensor t({obs_onehot.size() + num_subgoals_});
    for (std::size_t i = 0; i < obs_onehot.size(); ++i) t.data[i] = obs_onehot[i];
    t.data[obs_onehot.size() + subgoal] = 1.0;
    return t;
}

Tensor Agent::option_end_hidden(const OptionTrace& t) const {
    HiddenState state = HiddenState::zeros(cfg_.hidden);
    for (const auto& o : t.obs) state = eval_step(sub_, sub_input(o, t.subgoal), state).state;
    return state.h;
}

std::pair<int, HiddenState> Agent::eps_greedy(const ControllerNet& net, const Tensor& input,
                                              const HiddenState& state, double epsilon) {
    if (net.out_arity == 0) throw precondition_error("eps_greedy: empty choice set");
    // the recurrent step advances the hidden state before the branch
    EvalOut out = eval_step(net, input, state);
    int choice;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng_) < epsilon)
        choice = static_cast<int>(rng_() % net.out_arity);
    else
        choice = argmax_low(out.q);
    return {choice, std::move(out.state)};
}

void Agent::anneal(int episode, int total_episodes) {
    double horizon = cfg_.anneal_frac * static_cast<double>(total_episodes);
    double frac = horizon > 0.0 ? static_cast<double>(episode) / horizon : 1.0;
    frac = std::clamp(frac, 0.0, 1.0);
    eps_sub_ = cfg_.eps_start + frac * (cfg_.eps_end - cfg_.eps_start);
    eps_meta_ = cfg_.eps_start + frac * (cfg_.eps_meta_end - cfg_.eps_start);
}

void Agent::maybe_update(EpisodeStats& stats, bool learn) {
    if (!learn) return;
    ++global_step_;
    if (cfg_.update_every > 1 &&
        global_step_ % static_cast<std::uint64_t>(cfg_.update_every) != 0)
        return;
    if (mem_sub_.num_episodes() > 0) {
        stats.loss_sub += sub_update();
        stats.sub_updates += 1;
    }
}

EpisodeStats Agent::run_episode(GridEnv& env, bool learn) {
    return hierarchical() ? run_episode_hierarchical(env, learn)
                          : run_episode_flat(env, learn);
}

EpisodeStats Agent::run_episode_flat(GridEnv& env, bool learn) {
    EpisodeStats stats;
    Observation obs = env.reset();
    HiddenState h = HiddenState::zeros(cfg_.hidden);
    if (trace) trace({TraceEvent::Kind::EpisodeStart, HiddenState{}, h});
    std::vector<SubTransition> episode;
    bool terminal = false;
    while (!terminal) {
        auto [a, h2] = eps_greedy(sub_, sub_input(obs.onehot, 0), h, eps_sub_);
        h = std::move(h2);
        WorldState before = env.state();
        StepResult res = env.step(static_cast<Action>(a));
        terminal = res.terminal;

        stats.env_reward += res.env_reward;
        stats.extrinsic += extrinsic_reward(before, env.state());
        stats.steps += 1;

        SubTransition tr;
        tr.obs = obs.onehot;
        tr.action = a;
        tr.r_in = res.env_reward;  // flat baselines train on the raw env reward
        tr.next_obs = res.obs.onehot;
        tr.option_terminal = terminal;
        tr.episode_terminal = terminal;
        episode.push_back(std::move(tr));

        maybe_update(stats, learn);
        obs = std::move(res.obs);
        if (trace) trace({TraceEvent::Kind::Step, HiddenState{}, h});
    }
    stats.success = env.state().all_goals_collected();
    mem_sub_.append(std::move(episode));
    return stats;
}

EpisodeStats Agent::run_episode_hierarchical(GridEnv& env, bool learn) {
    EpisodeStats stats;
    Observation obs = env.reset();
    HiddenState h_meta = HiddenState::zeros(cfg_.hidden);
    // v2 feeds the sub-controller hidden state at the previous option's
    // end; zero before the first option
    Tensor last_sub_h({cfg_.hidden});
    if (trace) trace({TraceEvent::Kind::EpisodeStart, h_meta, HiddenState{}});

    std::vector<SubTransition> sub_episode;
    std::vector<MetaTransition> meta_episode;
    OptionTrace prev_trace;
    bool terminal = false;

    while (!terminal) {
        HiddenState h_sub = HiddenState::zeros(cfg_.hidden);
        if (trace) trace({TraceEvent::Kind::OptionStart, h_meta, h_sub});
        Tensor meta_in = cfg_.variant == Variant::HdrqnV2
                             ? last_sub_h
                             : bytes_to_tensor(obs.onehot);
        std::vector<double> option_start(meta_in.data);
        auto [g, hm2] = eps_greedy(meta_, meta_in, h_meta, eps_meta_);
        h_meta = std::move(hm2);

        double r_ex_total = 0.0;
        int k = 0;
        bool option_done = false;
        const SubgoalDescriptor& sg = env.subgoals()[g];
        OptionTrace cur_trace;
        cur_trace.subgoal = g;

        while (!terminal && !option_done) {
            cur_trace.obs.push_back(obs.onehot);
            auto [a, hs2] = eps_greedy(sub_, sub_input(obs.onehot, g), h_sub, eps_sub_);
            h_sub = std::move(hs2);
            WorldState before = env.state();
            StepResult res = env.step(static_cast<Action>(a));
            terminal = res.terminal;

            CriticResult critic = critic_evaluate(before, env.state(), sg);
            option_done = critic.option_terminal;
            double r_ex = extrinsic_reward(before, env.state());
            r_ex_total += std::pow(cfg_.gamma, k) * r_ex;
            k += 1;

            stats.env_reward += res.env_reward;
            stats.extrinsic += r_ex;
            stats.intrinsic += critic.r_in;
            stats.steps += 1;

            SubTransition tr;
            tr.obs = obs.onehot;
            tr.subgoal = g;
            tr.action = a;
            tr.r_in = critic.r_in;
            tr.next_obs = res.obs.onehot;
            tr.next_subgoal = g;
            tr.option_terminal = option_done || terminal;
            tr.episode_terminal = terminal;
            sub_episode.push_back(std::move(tr));

            maybe_update(stats, learn);
            obs = std::move(res.obs);
            if (trace) trace({TraceEvent::Kind::Step, h_meta, h_sub});
        }

        last_sub_h = h_sub.h;
        MetaTransition mt;
        mt.input = std::move(option_start);
        mt.subgoal = g;
        mt.r_ex_total = r_ex_total;
        mt.duration = k;
        mt.next_input = cfg_.variant == Variant::HdrqnV2
                            ? std::vector<double>(h_sub.h.data)
                            : std::vector<double>(obs.onehot.begin(), obs.onehot.end());
        mt.episode_terminal = terminal;
        mt.prev_trace = std::move(prev_trace);
        mt.trace = cur_trace;
        prev_trace = std::move(cur_trace);
        meta_episode.push_back(std::move(mt));

        // one meta update per completed option; the per-step cadence over-
        // replays the small meta memory and destabilises its Q-values
        if (learn && mem_meta_.num_episodes() > 0) {
            stats.loss_meta += meta_update();
            stats.meta_updates += 1;
        }
    }

    stats.success = env.state().all_goals_collected();
    mem_sub_.append(std::move(sub_episode));
    mem_meta_.append(std::move(meta_episode));
    return stats;
}

double Agent::sub_update() {
    auto windows = mem_sub_.sample_sequences(cfg_.batch, cfg_.n_sub, rng_);

    Graph g;
    BoundNet main = bind(g, sub_, true);
    BoundNet target = bind(g, sub_target_, false);
    Tensor zeros_h({cfg_.hidden});

    int loss_sum = -1;
    std::size_t masked_total = 0;

    for (const auto& w : windows) {
        std::size_t L = w.len;
        // unroll both nets over the window plus the final next observation
        std::vector<int> q_main(L + 1), q_tgt(L + 1);
        int mh = g.constant(zeros_h), mc = g.constant(zeros_h);
        int th = g.constant(zeros_h), tc = g.constant(zeros_h);
        for (std::size_t i = 0; i <= L; ++i) {
            const SubTransition& tr = w.at(i < L ? i : L - 1);
            Tensor in = i < L ? sub_input(tr.obs, tr.subgoal)
                              : sub_input(tr.next_obs, tr.subgoal);
            int x = g.constant(std::move(in));
            StepOut sm = recurrent_step(g, main, extract(g, main, x), mh, mc);
            mh = sm.h;
            mc = sm.c;
            q_main[i] = sm.q;
            StepOut st = recurrent_step(g, target, extract(g, target, x), th, tc);
            th = st.h;
            tc = st.c;
            q_tgt[i] = st.q;
            // mirror execution: the sub hidden state is zeroed at option
            // starts, so a window crossing an option boundary must not
            // carry state across it
            if (i < L && w.at(i).option_terminal) {
                mh = g.constant(zeros_h);
                mc = g.constant(zeros_h);
                th = g.constant(zeros_h);
                tc = g.constant(zeros_h);
            }
        }
        for (std::size_t t = 0; t < L; ++t) {
            if (!w.masked(t)) continue;  // burn-in feeds the hidden state only
            const SubTransition& tr = w.at(t);
            double y = tr.r_in;
            if (!tr.option_terminal && !tr.episode_terminal) {
                int a_star = argmax_low(g.value(q_main[t + 1]));
                y += cfg_.gamma * g.value(q_tgt[t + 1]).data[a_star];
            }
            int qa = g.slice(q_main[t], static_cast<std::size_t>(tr.action), 1);
            int sq = g.square(g.sub(qa, g.constant(Tensor::scalar(y))));
            loss_sum = loss_sum < 0 ? sq : g.add(loss_sum, sq);
            ++masked_total;
        }
    }

    int loss = g.scale(loss_sum, 1.0 / static_cast<double>(masked_total));
    g.backward(loss);

    std::vector<Tensor> grads;
    grads.reserve(main.pids.size());
    for (int pid : main.pids) grads.push_back(g.grad(pid));
    adam_step(sub_.params(), grads, adam_sub_);
    soft_update(sub_, sub_target_, cfg_.tau);
    return g.value(loss).data[0];
}

double Agent::meta_update() {
    if (!hierarchical()) throw precondition_error("meta_update on a flat agent");
    auto windows = mem_meta_.sample_sequences(cfg_.batch, cfg_.n_meta, rng_);

    Graph g;
    BoundNet main = bind(g, meta_, true);
    BoundNet target = bind(g, meta_target_, false);
    Tensor zeros_h({cfg_.hidden});

    int loss_sum = -1;
    std::size_t masked_total = 0;

    for (const auto& w : windows) {
        std::size_t L = w.len;
        std::vector<int> q_main(L + 1), q_tgt(L + 1);
        int mh = g.constant(zeros_h), mc = g.constant(zeros_h);
        int th = g.constant(zeros_h), tc = g.constant(zeros_h);
        for (std::size_t i = 0; i <= L; ++i) {
            const MetaTransition& tr = w.at(i < L ? i : L - 1);
            // v2 inputs are sub hidden states; the stored vectors go stale as
            // the sub learns, so rebuild them with the current sub network
            Tensor in = cfg_.variant == Variant::HdrqnV2
                            ? option_end_hidden(i < L ? tr.prev_trace : tr.trace)
                            : doubles_to_tensor(i < L ? tr.input : tr.next_input);
            int x = g.constant(std::move(in));
            StepOut sm = recurrent_step(g, main, extract(g, main, x), mh, mc);
            mh = sm.h;
            mc = sm.c;
            q_main[i] = sm.q;
            StepOut st = recurrent_step(g, target, extract(g, target, x), th, tc);
            th = st.h;
            tc = st.c;
            q_tgt[i] = st.q;
        }
        for (std::size_t t = 0; t < L; ++t) {
            if (!w.masked(t)) continue;
            const MetaTransition& tr = w.at(t);
            double y = tr.r_ex_total;
            if (!tr.episode_terminal) {
                int g_star = argmax_low(g.value(q_main[t + 1]));
                double factor = cfg_.meta_gamma_pow_k
                                    ? std::pow(cfg_.gamma, tr.duration)
                                    : cfg_.gamma;
                y += factor * g.value(q_tgt[t + 1]).data[g_star];
            }
            int qg = g.slice(q_main[t], static_cast<std::size_t>(tr.subgoal), 1);
            int sq = g.square(g.sub(qg, g.constant(Tensor::scalar(y))));
            loss_sum = loss_sum < 0 ? sq : g.add(loss_sum, sq);
            ++masked_total;
        }
    }

    int loss = g.scale(loss_sum, 1.0 / static_cast<double>(masked_total));
    g.backward(loss);

    std::vector<Tensor> grads;
    grads.reserve(main.pids.size());
    for (int pid : main.pids) grads.push_back(g.grad(pid));
    adam_step(meta_.params(), grads, adam_meta_);
    soft_update(meta_, meta_target_, cfg_.tau);
    return g.value(loss).data[0];
}

void Agent::save_checkpoint(const std::string& path) const {
    std::map<std::string, Tensor> m = sub_.to_param_map("sub.");
    auto merge = [&m](std::map<std::string, Tensor> other) {
        for (auto& [k, v] : other) m.emplace(k, std::move(v));
    };
    merge(sub_target_.to_param_map("sub_target."));
    if (hierarchical()) {
        merge(meta_.to_param_map("meta."));
        merge(meta_target_.to_param_map("meta_target."));
    }
    save_params(path, m);
}

void Agent::load_checkpoint(const std::string& path) {
    auto m = load_params(path);
    sub_.load_param_map(m, "sub.");
    sub_target_.load_param_map(m, "sub_target.");
    if (hierarchical()) {
        meta_.load_param_map(m, "meta.");
        meta_target_.load_param_map(m, "meta_target.");
    }
}

}  // namespace hrl
