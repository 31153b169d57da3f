#include "hrl/config.hpp"

#include <fstream>
#include <sstream>

namespace hrl {

int full_window_radius(const EnvConfig& env) {
    // the window must cover the whole map from any interior cell
    (void)env;
    return 9;  // 11x11 maps, interior cells in [1,9]
}

std::string ExperimentConfig::env_signature() const {
    std::ostringstream ss;
    ss << (env.layout == LayoutId::FourRooms ? "four_rooms" : "gridworld") << "/goals="
       << env.num_goals << "/obstacles=" << env.num_obstacles << "/radius="
       << env.window_radius << "/limit=" << env.step_limit << "/episodes=" << episodes;
    return ss.str();
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Parser {
    const std::string& origin;

    [[noreturn]] void fail(const std::string& msg) const {
        throw config_error(origin + ": " + msg);
    }

    int to_int(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos;
            int r = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return r;
        } catch (...) {
            fail("field '" + key + "': expected integer, got '" + v + "'");
        }
    }

    double to_double(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos;
            double r = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return r;
        } catch (...) {
            fail("field '" + key + "': expected number, got '" + v + "'");
        }
    }

    bool to_bool(const std::string& key, const std::string& v) const {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        fail("field '" + key + "': expected true/false, got '" + v + "'");
    }

    std::vector<std::string> split_csv(const std::string& v) const {
        std::vector<std::string> out;
        std::string item;
        std::istringstream ss(v);
        while (std::getline(ss, item, ',')) out.push_back(trim(item));
        return out;
    }
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig c;
    Parser p{origin};
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') p.fail("line " + std::to_string(lineno) + ": bad section");
            section = line.substr(1, line.size() - 2);
            if (section != "env" && section != "agent" && section != "run")
                p.fail("unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            p.fail("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string qual = section + "." + key;

        if (qual == "env.map") {
            if (val == "gridworld") c.env.layout = LayoutId::Gridworld;
            else if (val == "four_rooms") c.env.layout = LayoutId::FourRooms;
            else p.fail("field 'map': expected gridworld|four_rooms, got '" + val + "'");
        } else if (qual == "env.goals") {
            c.env.num_goals = p.to_int(key, val);
        } else if (qual == "env.obstacles") {
            c.env.num_obstacles = p.to_int(key, val);
        } else if (qual == "env.window_radius") {
            if (val == "full") c.env.window_radius = full_window_radius(c.env);
            else c.env.window_radius = p.to_int(key, val);
        } else if (qual == "env.step_limit") {
            c.env.step_limit = p.to_int(key, val);
        } else if (qual == "agent.variant") {
            c.agent.variant = variant_from_string(val);
        } else if (qual == "agent.gamma") {
            c.agent.gamma = p.to_double(key, val);
        } else if (qual == "agent.tau") {
            c.agent.tau = p.to_double(key, val);
        } else if (qual == "agent.lr") {
            c.agent.lr = p.to_double(key, val);
        } else if (qual == "agent.eps_start") {
            c.agent.eps_start = p.to_double(key, val);
        } else if (qual == "agent.eps_end") {
            c.agent.eps_end = p.to_double(key, val);
        } else if (qual == "agent.eps_meta_end") {
            c.agent.eps_meta_end = p.to_double(key, val);
        } else if (qual == "agent.anneal_frac") {
            c.agent.anneal_frac = p.to_double(key, val);
        } else if (qual == "agent.batch") {
            c.agent.batch = static_cast<std::size_t>(p.to_int(key, val));
        } else if (qual == "agent.n_sub") {
            c.agent.n_sub = static_cast<std::size_t>(p.to_int(key, val));
        } else if (qual == "agent.n_meta") {
            c.agent.n_meta = static_cast<std::size_t>(p.to_int(key, val));
        } else if (qual == "agent.cap_sub") {
            c.agent.cap_sub = static_cast<std::size_t>(p.to_double(key, val));
        } else if (qual == "agent.cap_meta") {
            c.agent.cap_meta = static_cast<std::size_t>(p.to_double(key, val));
        } else if (qual == "agent.hidden") {
            c.agent.hidden = static_cast<std::size_t>(p.to_int(key, val));
        } else if (qual == "agent.extractor") {
            c.agent.extractor.clear();
            for (const auto& s : p.split_csv(val))
                c.agent.extractor.push_back(static_cast<std::size_t>(p.to_int(key, s)));
        } else if (qual == "agent.update_every") {
            c.agent.update_every = p.to_int(key, val);
        } else if (qual == "agent.meta_gamma_pow_k") {
            c.agent.meta_gamma_pow_k = p.to_bool(key, val);
        } else if (qual == "run.name") {
            c.name = val;
        } else if (qual == "run.episodes") {
            c.episodes = p.to_int(key, val);
        } else if (qual == "run.seeds") {
            c.seeds.clear();
            for (const auto& s : p.split_csv(val))
                c.seeds.push_back(static_cast<std::uint64_t>(p.to_int(key, s)));
        } else if (qual == "run.outdir") {
            c.outdir = val;
        } else {
            p.fail("unknown field '" + key + "' in section [" + section + "]");
        }
    }

    if (c.env.num_goals < 2 || c.env.num_goals > 3) p.fail("field 'goals': must be 2 or 3");
    if (c.episodes < 0) p.fail("field 'episodes': must be >= 0");
    if (c.seeds.empty()) p.fail("field 'seeds': at least one seed required");
    if (c.agent.anneal_frac < 0.0 || c.agent.anneal_frac > 1.0)
        p.fail("field 'anneal_frac': must be in [0,1]");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string config_to_text(const ExperimentConfig& c) {
    std::ostringstream ss;
    ss << "[env]\n";
    ss << "map = " << (c.env.layout == LayoutId::FourRooms ? "four_rooms" : "gridworld")
       << "\n";
    ss << "goals = " << c.env.num_goals << "\n";
    ss << "obstacles = " << c.env.num_obstacles << "\n";
    ss << "window_radius = " << c.env.window_radius << "\n";
    ss << "step_limit = " << c.env.step_limit << "\n";
    ss << "\n[agent]\n";
    ss << "variant = " << to_string(c.agent.variant) << "\n";
    ss << "gamma = " << c.agent.gamma << "\n";
    ss << "tau = " << c.agent.tau << "\n";
    ss << "lr = " << c.agent.lr << "\n";
    ss << "eps_start = " << c.agent.eps_start << "\n";
    ss << "eps_end = " << c.agent.eps_end << "\n";
    ss << "eps_meta_end = " << c.agent.eps_meta_end << "\n";
    ss << "anneal_frac = " << c.agent.anneal_frac << "\n";
    ss << "batch = " << c.agent.batch << "\n";
    ss << "n_sub = " << c.agent.n_sub << "\n";
    ss << "n_meta = " << c.agent.n_meta << "\n";
    ss << "cap_sub = " << c.agent.cap_sub << "\n";
    ss << "cap_meta = " << c.agent.cap_meta << "\n";
    ss << "hidden = " << c.agent.hidden << "\n";
    ss << "extractor = ";
    for (std::size_t i = 0; i < c.agent.extractor.size(); ++i)
        ss << (i ? "," : "") << c.agent.extractor[i];
    ss << "\n";
    ss << "update_every = " << c.agent.update_every << "\n";
    ss << "meta_gamma_pow_k = " << (c.agent.meta_gamma_pow_k ? "true" : "false") << "\n";
    ss << "\n[run]\n";
    ss << "name = " << c.name << "\n";
    ss << "episodes = " << c.episodes << "\n";
    ss << "seeds = ";
    for (std::size_t i = 0; i < c.seeds.size(); ++i) ss << (i ? "," : "") << c.seeds[i];
    ss << "\n";
    ss << "outdir = " << c.outdir << "\n";
    return ss.str();
}

}  // namespace hrl
