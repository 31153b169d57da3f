#pragma once

#include <string>
#include <vector>

namespace hrl {

// Moving-average learning-curve chart. CSV files sharing a name up to a
// `_seed<k>` suffix are grouped: per-seed curves are drawn faint, the
// across-seed mean bold. Output is deterministic for fixed input.
std::string plot_curves_svg(const std::vector<std::string>& csv_paths,
                            const std::string& metric, std::size_t smoothing_window);

// Trailing moving average; window 1 returns the input unchanged.
std::vector<double> moving_average(const std::vector<double>& xs, std::size_t window);

}  // namespace hrl
