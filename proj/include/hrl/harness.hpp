#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrl/config.hpp"

namespace hrl {

// One CSV row per episode per seed. Schema version kMetricsSchema is the
// first header line of every metrics file.
struct MetricRow {
    int episode = 0;
    double env_reward = 0.0;
    double extrinsic = 0.0;
    double intrinsic = 0.0;
    int steps = 0;
    int success = 0;
    double eps_meta = 0.0;
    double eps_sub = 0.0;
    double loss_sub = 0.0;
    double loss_meta = 0.0;
};

extern const char* kMetricsSchema;  // header line, also the schema version

std::string metrics_csv_path(const ExperimentConfig& c, std::uint64_t seed);
std::string summary_path(const ExperimentConfig& c);

std::vector<MetricRow> read_metrics_csv(const std::string& path);

struct SeedSummary {
    std::uint64_t seed = 0;
    double final_extrinsic = 0.0;  // mean over the final window (last 10%)
    double final_env_reward = 0.0;
    double final_success = 0.0;
    double final_steps = 0.0;
};

struct ExperimentSummary {
    std::string name;
    std::string env_signature;
    std::string variant;
    int episodes = 0;
    std::vector<SeedSummary> per_seed;
    double mean_extrinsic = 0.0, std_extrinsic = 0.0;
    double mean_success = 0.0, std_success = 0.0;
    double mean_steps = 0.0, std_steps = 0.0;
    bool has_std = false;  // absent with a single seed
};

// Trains every seed (skipping seeds whose complete CSV already exists when
// reuse is set), writes per-seed CSVs and the summary file.
ExperimentSummary run_experiment(const ExperimentConfig& c, bool reuse_existing = false,
                                 bool verbose = false);

ExperimentSummary summarize_from_csvs(const ExperimentConfig& c);
void write_summary(const std::string& path, const ExperimentSummary& s);
ExperimentSummary read_summary(const std::string& path);

// Ranked final-performance table over all summaries in a directory.
// Mismatched environment signatures are an error.
std::string compare_experiments(const std::string& dir);

}  // namespace hrl
