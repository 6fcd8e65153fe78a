//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_PLOT_HPP
#define SWARMOPT_PLOT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace swarmopt {

struct CsvRow {
    std::string method;
    std::uint64_t seed = 0;
    std::size_t iteration = 0;
    double best_so_far = 0.0;
    double normalized = 0.0;
};

// Parses the trajectories CSV. Throws CsvParseError with the 1-based row.
std::vector<CsvRow> parse_trajectory_csv(std::string_view text);
std::vector<CsvRow> read_trajectory_csv(const std::filesystem::path &path);

enum class Aggregate { Median, Best };

Aggregate aggregate_from_string(std::string_view text);

// One polyline per method, aggregated across seeds at each iteration.
std::string render_svg(const std::vector<CsvRow> &rows, Aggregate aggregate);

// Reads csv_path and writes the SVG. Nothing is written on error.
void emit_svg_plot(const std::filesystem::path &csv_path, const std::filesystem::path &out_path,
                   Aggregate aggregate);

}  // namespace swarmopt

#endif  // SWARMOPT_PLOT_HPP
