#include "hrl/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hrl/harness.hpp"

namespace hrl {

std::vector<double> moving_average(const std::vector<double>& xs, std::size_t window) {
    if (window <= 1) return xs;
    std::vector<double> out(xs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        acc += xs[i];
        if (i >= window) acc -= xs[i - window];
        out[i] = acc / static_cast<double>(std::min(i + 1, window));
    }
    return out;
}

namespace {

double metric_of(const MetricRow& r, const std::string& metric) {
    if (metric == "env_reward") return r.env_reward;
    if (metric == "extrinsic") return r.extrinsic;
    if (metric == "intrinsic") return r.intrinsic;
    if (metric == "steps") return r.steps;
    if (metric == "success") return r.success;
    if (metric == "loss_sub") return r.loss_sub;
    if (metric == "loss_meta") return r.loss_meta;
    throw std::runtime_error("unknown metric column '" + metric + "'");
}

std::string group_label(const std::string& path) {
    std::string stem = std::filesystem::path(path).stem().string();
    auto pos = stem.rfind("_seed");
    if (pos != std::string::npos) {
        bool digits = pos + 5 < stem.size();
        for (std::size_t i = pos + 5; i < stem.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(stem[i]))) digits = false;
        if (digits) return stem.substr(0, pos);
    }
    return stem;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string plot_curves_svg(const std::vector<std::string>& csv_paths,
                            const std::string& metric, std::size_t smoothing_window) {
    if (csv_paths.empty()) throw std::runtime_error("plot: no input files");

    std::map<std::string, std::vector<std::vector<double>>> groups;
    std::vector<std::string> order;
    for (const auto& path : csv_paths) {
        auto rows = read_metrics_csv(path);
        std::vector<double> series;
        series.reserve(rows.size());
        for (const auto& r : rows) series.push_back(metric_of(r, metric));
        std::string label = group_label(path);
        if (!groups.count(label)) order.push_back(label);
        groups[label].push_back(moving_average(series, smoothing_window));
    }

    const double W = 900, H = 520, ml = 70, mr = 160, mt = 30, mb = 50;
    const double pw = W - ml - mr, ph = H - mt - mb;

    double ymin = 1e300, ymax = -1e300;
    std::size_t xmax = 1;
    for (const auto& [label, seeds] : groups)
        for (const auto& s : seeds) {
            xmax = std::max(xmax, s.size());
            for (double v : s) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    if (ymin > ymax) {
        ymin = 0;
        ymax = 1;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    auto px = [&](std::size_t i) {
        return ml + pw * static_cast<double>(i) / static_cast<double>(xmax > 1 ? xmax - 1 : 1);
    };
    auto py = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

    auto polyline = [&](const std::vector<double>& s, const char* color, double width,
                        double opacity) {
        std::ostringstream p;
        p << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
          << "\" stroke-opacity=\"" << opacity << "\" points=\"";
        // thin long series to at most ~2000 points
        std::size_t stride = std::max<std::size_t>(1, s.size() / 2000);
        for (std::size_t i = 0; i < s.size(); i += stride)
            p << fmt2(px(i)) << "," << fmt2(py(s[i])) << " ";
        if ((s.size() - 1) % stride != 0)
            p << fmt2(px(s.size() - 1)) << "," << fmt2(py(s.back())) << " ";
        p << "\"/>\n";
        return p.str();
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double v = ymin + (ymax - ymin) * i / 4.0;
        double y = py(v);
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << fmt2(y) << "\" x2=\"" << ml
            << "\" y2=\"" << fmt2(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << fmt2(y + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt2(v) << "</text>\n";
        std::size_t e = static_cast<std::size_t>(std::round((xmax - 1) * i / 4.0));
        double x = px(e);
        svg << "<line x1=\"" << fmt2(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt2(x)
            << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt2(x) << "\" y=\"" << mt + ph + 18
            << "\" font-size=\"12\" text-anchor=\"middle\">" << e << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 10
        << "\" font-size=\"13\" text-anchor=\"middle\">episode</text>\n";
    svg << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << mt + ph / 2 << ")\">" << metric << "</text>\n";

    int ci = 0;
    double ly = mt + 10;
    for (const auto& label : order) {
        const char* color = kPalette[ci % 8];
        const auto& seeds = groups[label];
        for (const auto& s : seeds) svg << polyline(s, color, 1.0, 0.3);
        // across-seed mean over the common length
        std::size_t minlen = seeds[0].size();
        for (const auto& s : seeds) minlen = std::min(minlen, s.size());
        std::vector<double> mean(minlen, 0.0);
        for (const auto& s : seeds)
            for (std::size_t i = 0; i < minlen; ++i) mean[i] += s[i];
        for (auto& v : mean) v /= static_cast<double>(seeds.size());
        svg << polyline(mean, color, 2.0, 1.0);
        svg << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << fmt2(ly - 4) << "\" x2=\""
            << ml + pw + 34 << "\" y2=\"" << fmt2(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + pw + 40 << "\" y=\"" << fmt2(ly)
            << "\" font-size=\"12\">" << label << "</text>\n";
        ly += 18;
        ++ci;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hrl
