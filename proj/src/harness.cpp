#include "hrl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace hrl {

namespace fs = std::filesystem;

const char* kMetricsSchema =
    "episode,env_reward,extrinsic,intrinsic,steps,success,eps_meta,eps_sub,loss_sub,loss_meta";

static std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string metrics_csv_path(const ExperimentConfig& c, std::uint64_t seed) {
    return c.outdir + "/" + c.name + "_seed" + std::to_string(seed) + ".csv";
}

std::string summary_path(const ExperimentConfig& c) {
    return c.outdir + "/" + c.name + "_summary.txt";
}

std::vector<MetricRow> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metrics file " + path);
    std::string line;
    if (!std::getline(in, line) || line != kMetricsSchema)
        throw std::runtime_error(path + ": metrics schema mismatch; expected header '" +
                                 std::string(kMetricsSchema) + "'");
    std::vector<MetricRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        MetricRow r;
        std::istringstream ss(line);
        std::string tok;
        auto next = [&]() {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error(path + ": short row");
            return tok;
        };
        r.episode = std::stoi(next());
        r.env_reward = std::stod(next());
        r.extrinsic = std::stod(next());
        r.intrinsic = std::stod(next());
        r.steps = std::stoi(next());
        r.success = std::stoi(next());
        r.eps_meta = std::stod(next());
        r.eps_sub = std::stod(next());
        r.loss_sub = std::stod(next());
        r.loss_meta = std::stod(next());
        rows.push_back(r);
    }
    return rows;
}

static void train_one_seed(const ExperimentConfig& c, std::uint64_t seed, bool verbose) {
    GridEnv env(c.env, seed);
    Agent agent(c.agent, env, seed ^ 0x9E3779B97F4A7C15ULL);

    std::string path = metrics_csv_path(c, seed);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << kMetricsSchema << "\n";
    for (int ep = 0; ep < c.episodes; ++ep) {
        agent.anneal(ep, c.episodes);
        EpisodeStats st = agent.run_episode(env, true);
        double lsub = st.sub_updates ? st.loss_sub / st.sub_updates : 0.0;
        double lmeta = st.meta_updates ? st.loss_meta / st.meta_updates : 0.0;
        out << ep << ',' << fmt(st.env_reward) << ',' << fmt(st.extrinsic) << ','
            << fmt(st.intrinsic) << ',' << st.steps << ',' << (st.success ? 1 : 0) << ','
            << fmt(agent.eps_meta()) << ',' << fmt(agent.eps_sub()) << ',' << fmt(lsub)
            << ',' << fmt(lmeta) << "\n";
        if (verbose && (ep + 1) % 500 == 0)
            std::fprintf(stderr, "[%s seed %llu] episode %d/%d\n", c.name.c_str(),
                         static_cast<unsigned long long>(seed), ep + 1, c.episodes);
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

static bool csv_complete(const std::string& path, int episodes) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    if (!std::getline(in, line) || line != kMetricsSchema) return false;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    return rows == episodes;
}

ExperimentSummary summarize_from_csvs(const ExperimentConfig& c) {
    ExperimentSummary s;
    s.name = c.name;
    s.env_signature = c.env_signature();
    s.variant = to_string(c.agent.variant);
    s.episodes = c.episodes;

    for (std::uint64_t seed : c.seeds) {
        auto rows = read_metrics_csv(metrics_csv_path(c, seed));
        SeedSummary ss;
        ss.seed = seed;
        if (!rows.empty()) {
            std::size_t window = std::max<std::size_t>(1, rows.size() / 10);
            std::size_t from = rows.size() - window;
            for (std::size_t i = from; i < rows.size(); ++i) {
                ss.final_extrinsic += rows[i].extrinsic;
                ss.final_env_reward += rows[i].env_reward;
                ss.final_success += rows[i].success;
                ss.final_steps += rows[i].steps;
            }
            ss.final_extrinsic /= window;
            ss.final_env_reward /= window;
            ss.final_success /= window;
            ss.final_steps /= window;
        }
        s.per_seed.push_back(ss);
    }

    auto stats = [&](auto field, double& mean, double& sd) {
        mean = 0.0;
        for (const auto& ss : s.per_seed) mean += field(ss);
        mean /= s.per_seed.size();
        if (s.per_seed.size() > 1) {
            double acc = 0.0;
            for (const auto& ss : s.per_seed) {
                double d = field(ss) - mean;
                acc += d * d;
            }
            sd = std::sqrt(acc / (s.per_seed.size() - 1));
        }
    };
    stats([](const SeedSummary& x) { return x.final_extrinsic; }, s.mean_extrinsic,
          s.std_extrinsic);
    stats([](const SeedSummary& x) { return x.final_success; }, s.mean_success,
          s.std_success);
    stats([](const SeedSummary& x) { return x.final_steps; }, s.mean_steps, s.std_steps);
    s.has_std = s.per_seed.size() > 1;
    return s;
}

ExperimentSummary run_experiment(const ExperimentConfig& c, bool reuse_existing,
                                 bool verbose) {
    fs::create_directories(c.outdir);

    std::vector<std::uint64_t> todo;
    for (std::uint64_t seed : c.seeds)
        if (!reuse_existing || !csv_complete(metrics_csv_path(c, seed), c.episodes))
            todo.push_back(seed);

    // independent seed workers, no shared mutable state
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(todo.size());
    for (std::size_t i = 0; i < todo.size(); ++i)
        workers.emplace_back([&, i] {
            try {
                train_one_seed(c, todo[i], verbose);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    ExperimentSummary s = summarize_from_csvs(c);
    write_summary(summary_path(c), s);
    return s;
}

void write_summary(const std::string& path, const ExperimentSummary& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "name = " << s.name << "\n";
    out << "env_signature = " << s.env_signature << "\n";
    out << "variant = " << s.variant << "\n";
    out << "episodes = " << s.episodes << "\n";
    out << "seeds = " << s.per_seed.size() << "\n";
    for (const auto& ss : s.per_seed) {
        out << "seed." << ss.seed << ".final_extrinsic = " << fmt(ss.final_extrinsic) << "\n";
        out << "seed." << ss.seed << ".final_env_reward = " << fmt(ss.final_env_reward)
            << "\n";
        out << "seed." << ss.seed << ".final_success = " << fmt(ss.final_success) << "\n";
        out << "seed." << ss.seed << ".final_steps = " << fmt(ss.final_steps) << "\n";
    }
    out << "final_extrinsic.mean = " << fmt(s.mean_extrinsic) << "\n";
    out << "final_extrinsic.std = " << (s.has_std ? fmt(s.std_extrinsic) : "absent") << "\n";
    out << "final_success.mean = " << fmt(s.mean_success) << "\n";
    out << "final_success.std = " << (s.has_std ? fmt(s.std_success) : "absent") << "\n";
    out << "final_steps.mean = " << fmt(s.mean_steps) << "\n";
    out << "final_steps.std = " << (s.has_std ? fmt(s.std_steps) : "absent") << "\n";
}

ExperimentSummary read_summary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open summary " + path);
    ExperimentSummary s;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto strip = [](std::string& x) {
            while (!x.empty() && (x.front() == ' ')) x.erase(x.begin());
            while (!x.empty() && (x.back() == ' ' || x.back() == '\r')) x.pop_back();
        };
        strip(key);
        strip(val);
        if (key == "name") s.name = val;
        else if (key == "env_signature") s.env_signature = val;
        else if (key == "variant") s.variant = val;
        else if (key == "episodes") s.episodes = std::stoi(val);
        else if (key == "final_extrinsic.mean") s.mean_extrinsic = std::stod(val);
        else if (key == "final_extrinsic.std") {
            s.has_std = val != "absent";
            if (s.has_std) s.std_extrinsic = std::stod(val);
        } else if (key == "final_success.mean") s.mean_success = std::stod(val);
        else if (key == "final_success.std" && val != "absent") s.std_success = std::stod(val);
        else if (key == "final_steps.mean") s.mean_steps = std::stod(val);
        else if (key == "final_steps.std" && val != "absent") s.std_steps = std::stod(val);
    }
    return s;
}

std::string compare_experiments(const std::string& dir) {
    std::vector<ExperimentSummary> summaries;
    std::vector<std::string> paths;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename().string().ends_with("_summary.txt"))
            paths.push_back(e.path().string());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) summaries.push_back(read_summary(p));
    if (summaries.size() < 2)
        throw std::runtime_error("compare: need at least 2 completed experiments in " + dir);
    for (std::size_t i = 1; i < summaries.size(); ++i)
        if (summaries[i].env_signature != summaries[0].env_signature)
            throw std::runtime_error("compare: env mismatch between '" + summaries[0].name +
                                     "' (" + summaries[0].env_signature + ") and '" +
                                     summaries[i].name + "' (" + summaries[i].env_signature +
                                     ")");
    std::stable_sort(summaries.begin(), summaries.end(),
                     [](const ExperimentSummary& a, const ExperimentSummary& b) {
                         if (a.mean_extrinsic != b.mean_extrinsic)
                             return a.mean_extrinsic > b.mean_extrinsic;
                         return a.name < b.name;  // stable tie order by name
                     });
    std::ostringstream out;
    out << "rank  name                      variant    final_extrinsic  std\n";
    int rank = 1;
    for (const auto& s : summaries) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-5d %-25s %-10s %-16.6f %s\n", rank++,
                      s.name.c_str(), s.variant.c_str(), s.mean_extrinsic,
                      s.has_std ? fmt(s.std_extrinsic).c_str() : "absent");
        out << buf;
    }
    return out.str();
}

}  // namespace hrl
