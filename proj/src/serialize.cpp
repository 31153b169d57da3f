#include "hrl/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hrl/errors.hpp"

namespace hrl {

static constexpr const char* kMagic = "hrl-params v1";

void save_params(const std::string& path, const std::map<std::string, Tensor>& params) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << kMagic << "\n";
    char buf[64];
    for (const auto& [name, t] : params) {
        out << name << " " << t.ndim();
        for (auto d : t.shape) out << " " << d;
        out << " :";
        for (double v : t.data) {
            std::snprintf(buf, sizeof(buf), " %a", v);
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::map<std::string, Tensor> load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        throw std::runtime_error(path + ": not a parameter file (bad header)");
    std::map<std::string, Tensor> params;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string name;
        std::size_t ndim;
        if (!(ss >> name >> ndim)) throw std::runtime_error(path + ": malformed record");
        std::vector<std::size_t> shape(ndim);
        for (auto& d : shape)
            if (!(ss >> d)) throw std::runtime_error(path + ": malformed shape for " + name);
        std::string colon;
        ss >> colon;
        if (colon != ":") throw std::runtime_error(path + ": malformed record for " + name);
        std::size_t n = Tensor::numel_of(shape);
        std::vector<double> data(n);
        std::string tok;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(ss >> tok)) throw std::runtime_error(path + ": truncated data for " + name);
            data[i] = std::strtod(tok.c_str(), nullptr);
        }
        params.emplace(name, Tensor(std::move(shape), std::move(data)));
    }
    return params;
}

}  // namespace hrl
