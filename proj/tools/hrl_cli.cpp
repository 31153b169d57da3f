#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hrl/harness.hpp"
#include "hrl/oracle_domains.hpp"
#include "hrl/plot.hpp"

namespace fs = std::filesystem;

// HRL_OUTPUT_ROOT is prepended to relative output directories.
static std::string resolve_outdir(const std::string& dir) {
    const char* root = std::getenv("HRL_OUTPUT_ROOT");
    if (root && *root && fs::path(dir).is_relative())
        return (fs::path(root) / dir).string();
    return dir;
}

int main(int argc, char** argv) {
    CLI::App app{"hierarchical recurrent Q-learning experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    bool reuse = false, verbose = false;
    auto* train = app.add_subcommand("train", "train all seeds of one experiment config");
    train->add_option("config", config_path, "experiment config file")->required();
    train->add_flag("--reuse", reuse, "skip seeds whose metrics CSV is already complete");
    train->add_flag("-v,--verbose", verbose, "progress output");

    std::vector<std::string> csvs;
    std::string plot_out = "curves.svg", metric = "extrinsic";
    std::size_t window = 200;
    auto* plot = app.add_subcommand("plot", "render learning curves to SVG");
    plot->add_option("csv", csvs, "metrics CSV files")->required();
    plot->add_option("--out", plot_out, "output SVG path");
    plot->add_option("--metric", metric, "metric column to plot");
    plot->add_option("--window", window, "trailing moving-average window");

    std::string compare_dir;
    auto* compare = app.add_subcommand("compare", "rank completed experiments in a directory");
    compare->add_option("dir", compare_dir, "directory holding *_summary.txt files")
        ->required();

    auto* oracle = app.add_subcommand("oracle-check", "run the tabular SMDP oracle suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            hrl::ExperimentConfig cfg = hrl::load_config(config_path);
            cfg.outdir = resolve_outdir(cfg.outdir);
            auto summary = hrl::run_experiment(cfg, reuse, verbose);
            std::cout << "experiment '" << summary.name << "' finished: final extrinsic "
                      << summary.mean_extrinsic << " +- "
                      << (summary.has_std ? std::to_string(summary.std_extrinsic) : "absent")
                      << " over " << summary.per_seed.size() << " seed(s)\n";
            std::cout << "summary: " << hrl::summary_path(cfg) << "\n";
        } else if (*plot) {
            std::string svg = hrl::plot_curves_svg(csvs, metric, window);
            std::ofstream out(plot_out);
            if (!out) throw std::runtime_error("cannot open " + plot_out + " for writing");
            out << svg;
            std::cout << "wrote " << plot_out << "\n";
        } else if (*compare) {
            std::cout << hrl::compare_experiments(compare_dir);
        } else if (*oracle) {
            auto res = hrl::run_oracle_checks();
            std::cout << res.report;
            if (!res.pass) return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
