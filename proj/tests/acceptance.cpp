// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Experiment-backed criteria reuse completed metric CSVs found under
// the output root (HRL_OUTPUT_ROOT), training any missing seeds in place.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "hrl/agent.hpp"
#include "hrl/harness.hpp"
#include "hrl/oracle_domains.hpp"
#include "hrl/replay.hpp"

namespace fs = std::filesystem;
using namespace hrl;

namespace {

bool g_all_pass = true;

void report(int id, bool pass, const std::string& detail) {
    g_all_pass = g_all_pass && pass;
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << " — "
              << detail << "\n"
              << std::flush;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// --- criterion 1: BPTT vs central finite differences ---------------------

void criterion_gradients() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        worst = std::max(worst, testutil::gradcheck_case(seed));
    double secs = seconds_since(t0);
    report(1, worst < 1e-4 && secs < 60.0,
           "max BPTT/FD relative error " + fmt(worst) + " over 100 seeds in " +
               fmt(secs) + "s");
}

// --- criterion 2: tabular oracle self-checks -----------------------------

void criterion_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    OracleCheckResult res = run_oracle_checks();
    double secs = seconds_since(t0);
    report(2, res.pass && secs < 60.0,
           (res.pass ? "all bundled domains within tolerance" : res.report) + " (" +
               fmt(secs) + "s)");
}

// --- criteria 3-6: experiment matrix -------------------------------------

std::string config_dir() {
#ifdef HRL_CONFIG_DIR
    return HRL_CONFIG_DIR;
#else
    return "configs";
#endif
}

ExperimentConfig load_preset(const std::string& name) {
    ExperimentConfig c = load_config((fs::path(config_dir()) / (name + ".ini")).string());
    const char* root = std::getenv("HRL_OUTPUT_ROOT");
    if (root && *root && fs::path(c.outdir).is_relative())
        c.outdir = (fs::path(root) / c.outdir).string();
    return c;
}

std::map<std::string, ExperimentSummary> run_matrix() {
    std::map<std::string, ExperimentSummary> out;
    for (const char* name : {"v2_w5", "v1_w5", "drqn_w5", "hdqn_w5", "dqn_w5",
                             "v2_full", "v2_w3", "v2_n1"}) {
        std::cerr << "[experiment] " << name << "...\n" << std::flush;
        out[name] = run_experiment(load_preset(name), /*reuse_existing=*/true);
    }
    return out;
}

// strict gap: the means must differ by more than the larger across-seed std
bool gap_exceeds_std(const ExperimentSummary& hi, const ExperimentSummary& lo) {
    return hi.mean_extrinsic - lo.mean_extrinsic >
           std::max(hi.std_extrinsic, lo.std_extrinsic);
}

void criterion_success(const std::map<std::string, ExperimentSummary>& m) {
    const ExperimentSummary& s = m.at("v2_w5");
    bool ok = s.mean_success >= 0.8 && s.mean_steps >= 15.0 && s.mean_steps <= 33.0;
    report(3, ok,
           "v2_w5 final-window success " + fmt(s.mean_success) + " (need >= 0.8), steps " +
               fmt(s.mean_steps) + " (need [15, 33])");
}

void criterion_ordering(const std::map<std::string, ExperimentSummary>& m) {
    const auto &v2 = m.at("v2_w5"), &v1 = m.at("v1_w5"), &drqn = m.at("drqn_w5"),
               &hdqn = m.at("hdqn_w5"), &dqn = m.at("dqn_w5");
    bool ok = v2.mean_extrinsic >= v1.mean_extrinsic && gap_exceeds_std(v1, drqn) &&
              gap_exceeds_std(v2, hdqn) && gap_exceeds_std(hdqn, dqn);
    report(4, ok,
           "final extrinsic: v2 " + fmt(v2.mean_extrinsic) + " >= v1 " +
               fmt(v1.mean_extrinsic) + " > drqn " + fmt(drqn.mean_extrinsic) +
               "; v2 > hdqn " + fmt(hdqn.mean_extrinsic) + " > dqn " +
               fmt(dqn.mean_extrinsic) + " (strict gaps vs std)");
}

void criterion_observability(const std::map<std::string, ExperimentSummary>& m) {
    double full = m.at("v2_full").mean_extrinsic, w5 = m.at("v2_w5").mean_extrinsic,
           w3 = m.at("v2_w3").mean_extrinsic;
    report(5, full >= w5 && w5 >= w3,
           "final extrinsic: full " + fmt(full) + " >= 5x5 " + fmt(w5) + " >= 3x3 " +
               fmt(w3));
}

void criterion_sequence_length(const std::map<std::string, ExperimentSummary>& m) {
    const auto &n8 = m.at("v2_w5"), &n1 = m.at("v2_n1");
    report(6, gap_exceeds_std(n8, n1),
           "final extrinsic: n_sub=8 " + fmt(n8.mean_extrinsic) + " vs n_sub=1 " +
               fmt(n1.mean_extrinsic) + " (std " + fmt(n8.std_extrinsic) + "/" +
               fmt(n1.std_extrinsic) + ")");
}

// --- criterion 7: replay/target mechanics --------------------------------

void zero_net(ControllerNet& net) {
    for (Tensor* p : net.params())
        for (auto& v : p->data) v = 0.0;
}

void criterion_mechanics() {
    std::vector<std::string> fails;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) fails.push_back(what);
    };

    // mask cardinality ceil(n/2) and window contiguity
    {
        ReplayMemory<int> mem(100);
        std::vector<int> ep;
        for (int i = 0; i < 10; ++i) ep.push_back(i);
        mem.append(ep);
        std::mt19937_64 rng(3);
        for (std::size_t n = 1; n <= 8; ++n)
            for (const auto& w : mem.sample_sequences(16, n, rng)) {
                expect(w.mask_count() == (w.len + 1) / 2, "mask cardinality");
                for (std::size_t i = 0; i < w.len; ++i)
                    expect(w.at(i) == static_cast<int>(w.start + i), "window contiguity");
            }
    }

    // soft-update contraction: the gap shrinks by exactly (1 - tau)
    {
        std::mt19937_64 rng(7);
        ControllerNet a = ControllerNet::make(5, {6}, 4, 3, true, rng);
        ControllerNet b = ControllerNet::make(5, {6}, 4, 3, true, rng);
        std::vector<double> gap0;
        auto pa = a.params();
        auto pb = b.params();
        for (std::size_t k = 0; k < pa.size(); ++k)
            for (std::size_t i = 0; i < pa[k]->numel(); ++i)
                gap0.push_back(pa[k]->data[i] - pb[k]->data[i]);
        const double tau = 0.001;
        soft_update(a, b, tau);
        std::size_t j = 0;
        for (std::size_t k = 0; k < pa.size(); ++k)
            for (std::size_t i = 0; i < pa[k]->numel(); ++i, ++j)
                expect(std::abs(pa[k]->data[i] - pb[k]->data[i] - (1 - tau) * gap0[j]) <
                           1e-12,
                       "soft-update contraction");
    }

    EnvConfig ecfg;
    ecfg.window_radius = 1;
    GridEnv env(ecfg, 1);
    auto blank = std::vector<std::uint8_t>(env.obs_dim(), 0);

    // double-dqn wiring on adversarial networks: the main net's argmax is
    // scored by the target net, not the target's own argmax
    {
        AgentConfig cfg;
        cfg.variant = Variant::Dqn;
        cfg.hidden = 4;
        cfg.extractor = {8};
        cfg.batch = 1;
        cfg.n_sub = 1;
        cfg.tau = 0.0;
        Agent a(cfg, env, 5);
        zero_net(a.sub_net());
        zero_net(a.sub_target());
        a.sub_net().adv_head.b = Tensor::vec({0, 10, 0, 0});     // main argmax 1
        a.sub_target().value_head.b = Tensor::vec({1});
        a.sub_target().adv_head.b = Tensor::vec({1, 2, 3, 4});   // target argmax 3
        SubTransition tr;
        tr.obs = blank;
        tr.next_obs = blank;
        tr.action = 3;
        tr.r_in = 0.2;
        a.sub_memory().append({tr});
        double y = 0.2 + 0.99 * 0.5;  // target q at the MAIN argmax
        expect(std::abs(a.sub_update() - (-2.5 - y) * (-2.5 - y)) < 1e-9,
               "double-dqn wiring");

        // terminal-bootstrap zeroing: a poisoned target must not leak in
        Agent b(cfg, env, 5);
        zero_net(b.sub_net());
        zero_net(b.sub_target());
        b.sub_target().value_head.b = Tensor::vec({100});
        SubTransition tt;
        tt.obs = blank;
        tt.next_obs = blank;
        tt.action = 0;
        tt.r_in = 1.0;
        tt.option_terminal = true;
        tt.episode_terminal = true;
        b.sub_memory().append({tt});
        expect(std::abs(b.sub_update() - 1.0) < 1e-9, "terminal-bootstrap zeroing");
    }

    // gamma^k meta target: k = 3, gamma = 0.99 -> factor 0.970299
    {
        AgentConfig cfg;
        cfg.variant = Variant::Hdqn;
        cfg.hidden = 4;
        cfg.extractor = {8};
        cfg.batch = 1;
        cfg.n_meta = 1;
        cfg.tau = 0.0;
        Agent a(cfg, env, 5);
        zero_net(a.meta_net());
        zero_net(a.meta_target());
        a.meta_net().adv_head.b = Tensor::vec({0, 5});
        a.meta_target().value_head.b = Tensor::vec({2});
        a.meta_target().adv_head.b = Tensor::vec({0, 1});  // target q = [1.5, 2.5]
        MetaTransition mt;
        mt.input.assign(env.obs_dim(), 0.0);
        mt.next_input.assign(env.obs_dim(), 0.0);
        mt.subgoal = 0;
        mt.r_ex_total = 0.5;
        mt.duration = 3;
        a.meta_memory().append({mt});
        double y = 0.5 + 0.970299 * 2.5;
        expect(std::abs(a.meta_update() - (-2.5 - y) * (-2.5 - y)) < 1e-9,
               "gamma^k meta target");
    }

    std::string detail = "mask, contiguity, soft update, double-dqn, terminal, gamma^k";
    if (!fails.empty()) {
        detail = "failed:";
        for (const auto& f : fails) detail += " " + f + ";";
    }
    report(7, fails.empty(), detail);
}

// --- criterion 8: determinism --------------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), {});
}

void criterion_determinism() {
    ExperimentConfig c = parse_config_text(
        "[env]\ngoals = 2\nwindow_radius = 2\nstep_limit = 12\n"
        "[agent]\nvariant = hdrqn_v2\nhidden = 6\nextractor = 8\n"
        "[run]\nname = det\nepisodes = 6\nseeds = 9\noutdir = .\n",
        "acceptance");
    fs::path base = fs::temp_directory_path() / "hrl_acceptance_det";
    fs::remove_all(base);
    ExperimentConfig c1 = c, c2 = c;
    c1.outdir = (base / "a").string();
    c2.outdir = (base / "b").string();
    fs::create_directories(c1.outdir);
    fs::create_directories(c2.outdir);
    run_experiment(c1);
    run_experiment(c2);
    std::string s1 = slurp(metrics_csv_path(c1, 9)), s2 = slurp(metrics_csv_path(c2, 9));
    report(8, !s1.empty() && s1 == s2,
           "identical config + seed -> bitwise-identical metric CSV (" +
               std::to_string(s1.size()) + " bytes)");
    fs::remove_all(base);
}

}  // namespace

int main() {
    try {
        criterion_gradients();
        criterion_oracle();
        auto matrix = run_matrix();
        criterion_success(matrix);
        criterion_ordering(matrix);
        criterion_observability(matrix);
        criterion_sequence_length(matrix);
        criterion_mechanics();
        criterion_determinism();
    } catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << "\n";
        return 1;
    }
    return g_all_pass ? 0 : 1;
}
