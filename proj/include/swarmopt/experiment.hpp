//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_EXPERIMENT_HPP
#define SWARMOPT_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmopt/config.hpp"
#include "swarmopt/env.hpp"
#include "swarmopt/llm.hpp"
#include "swarmopt/solvers.hpp"

namespace swarmopt {

// Best-so-far series of one (method, seed) run. Index 0 is the state right
// after initialization, index t the state after coordinator round t.
struct RunTrajectory {
    Method method = Method::Dynamic;
    std::uint64_t seed = 0;
    std::vector<double> best_so_far;
    std::vector<std::size_t> cumulative_evaluations;
    bool completed = true;
    std::string error;
};

// Append-only JSONL sink shared by every run of one experiment. A
// default-constructed log discards records.
class TranscriptLog {
public:
    TranscriptLog() = default;
    explicit TranscriptLog(const std::filesystem::path &path);

    bool enabled() const noexcept { return out_.is_open(); }
    void write(const nlohmann::json &record);

private:
    std::ofstream out_;
    std::mutex mutex_;
};

struct RunContext {
    const ExperimentConfig &config;
    const ChannelRealization &channel;
    const Proposer &proposer;
    TranscriptLog *log = nullptr;
};

// Seed of the per-agent random streams for one run.
std::uint64_t agent_stream_seed(std::uint64_t run_seed, std::uint64_t mock_seed);

// Runs one coordination policy for one seed: init all agents, then
// n_iterations rounds of step-all-agents followed by sync.
RunTrajectory run_policy(const RunContext &ctx, Policy policy, std::uint64_t run_seed);

// Uniform random search with the same per-iteration evaluation budget as
// the agent swarm (n_agents * n_init at init, n_agents * actions_per_step
// per round).
RunTrajectory run_brute_force(const RunContext &ctx, std::uint64_t run_seed);

struct RunArtifacts {
    ChannelRealization channel;
    SolverResult baseline;
    double baseline_value = 0.0;
    std::optional<SolverResult> oracle{};
    std::map<Method, std::vector<RunTrajectory>> trajectories{};
    std::map<Method, std::vector<std::vector<double>>> normalized{};
    std::filesystem::path transcript_path{};
    std::filesystem::path csv_path{};
    std::filesystem::path summary_path{};
};

struct ExperimentOptions {
    // Write channel.json, trajectories.csv, transcript.jsonl and
    // summary.json into config.output_dir.
    bool write_files = true;
    // Skip the exhaustive grid search (it is only reported, never used).
    bool compute_oracle = true;
    // Overrides the proposer built from config.proposer.
    std::shared_ptr<const Proposer> proposer;
};

RunArtifacts run_experiment(const ExperimentConfig &config, const ExperimentOptions &options = {});

// Element-wise division by the baseline. InvalidState unless baseline > 0.
std::vector<std::vector<double>> normalize_trajectories(const std::vector<RunTrajectory> &runs,
                                                        double baseline_value);
std::vector<double> normalize_series(const std::vector<double> &series, double baseline_value);

// First index whose value reaches threshold.
std::optional<std::size_t> first_crossing(const std::vector<double> &normalized, double threshold);

// Median of first crossings, counting a run that never crosses as
// n_iterations + 1.
double median_crossing(const std::vector<std::vector<double>> &normalized, double threshold,
                       std::size_t n_iterations);

double median(std::vector<double> values);

void write_csv(const RunArtifacts &artifacts, const ExperimentConfig &config,
               const std::filesystem::path &path);

nlohmann::json make_summary(const RunArtifacts &artifacts, const ExperimentConfig &config);

// Shortest decimal text that parses back to the same double.
std::string shortest_decimal(double value);

}  // namespace swarmopt

#endif  // SWARMOPT_EXPERIMENT_HPP
