//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "swarmopt/config.hpp"
#include "swarmopt/env.hpp"
#include "swarmopt/experiment.hpp"
#include "swarmopt/plot.hpp"
#include "swarmopt/solvers.hpp"

using namespace swarmopt;

namespace {

struct ChannelFlags {
    std::string config_path;
    std::string channel_path;
    std::optional<std::string> objective;
    std::optional<std::size_t> n_cells;
    std::optional<std::uint64_t> channel_seed;
};

void add_channel_flags(CLI::App *cmd, ChannelFlags &flags) {
    cmd->add_option("-c,--config", flags.config_path, "Experiment TOML file")->check(CLI::ExistingFile);
    cmd->add_option("--channel", flags.channel_path, "Channel JSON document (overrides sampling)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--objective", flags.objective, "SE or EE");
    cmd->add_option("--n-cells", flags.n_cells, "Number of cells");
    cmd->add_option("--channel-seed", flags.channel_seed, "Channel sampling seed");
}

struct Problem {
    ExperimentConfig config;
    std::optional<ChannelRealization> channel;
};

Problem resolve(const ChannelFlags &flags) {
    ConfigOverrides o;
    o.objective = flags.objective;
    o.n_cells = flags.n_cells;
    o.channel_seed = flags.channel_seed;
    std::optional<std::filesystem::path> path;
    if (!flags.config_path.empty())
        path = flags.config_path;

    Problem problem{load_config(path, o), std::nullopt};
    if (!flags.channel_path.empty()) {
        std::ifstream in(flags.channel_path);
        problem.channel = channel_from_json(nlohmann::json::parse(in));
    } else {
        problem.channel = sample_channel(problem.config.n_cells, problem.config.channel_seed,
                                         problem.config.channel_params());
    }
    return problem;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Collaborative multi-proposer power-control optimizer"};
    app.require_subcommand(1);

    // run
    auto *run = app.add_subcommand("run", "Run the configured experiment");
    std::string run_config;
    ConfigOverrides overrides;
    bool no_oracle = false;
    run->add_option("-c,--config", run_config, "Experiment TOML file")->check(CLI::ExistingFile);
    run->add_option("--objective", overrides.objective, "SE or EE");
    run->add_option("--n-cells", overrides.n_cells, "Number of cells");
    run->add_option("--n-agents", overrides.n_agents, "Number of optimizer agents");
    run->add_option("--n-iterations", overrides.n_iterations, "Coordinator rounds");
    run->add_option("--actions-per-step", overrides.actions_per_step, "Proposals per agent per round");
    run->add_option("--methods", overrides.methods, "Dynamic, Passive, None, BruteForce");
    run->add_option("--channel-seed", overrides.channel_seed, "Channel sampling seed");
    run->add_option("--seeds", overrides.run_seeds, "Run seeds");
    run->add_option("--proposer", overrides.proposer_kind, "mock or remote");
    run->add_option("--model", overrides.model_name, "Remote model name");
    run->add_option("--endpoint", overrides.endpoint_url, "OpenAI-compatible base URL");
    run->add_option("-o,--out", overrides.output_dir, "Output directory");
    run->add_flag("--no-oracle", no_oracle, "Skip the exhaustive grid reference");

    // baseline
    auto *baseline = app.add_subcommand("baseline", "Multi-start WMMSE (SE) or Dinkelbach (EE)");
    ChannelFlags baseline_flags;
    add_channel_flags(baseline, baseline_flags);
    std::optional<std::size_t> starts;
    baseline->add_option("--starts", starts, "Number of random starts");

    // oracle
    auto *oracle = app.add_subcommand("oracle", "Exhaustive grid search");
    ChannelFlags oracle_flags;
    add_channel_flags(oracle, oracle_flags);
    std::optional<std::size_t> points;
    oracle->add_option("--points", points, "Grid points per axis");

    // plot
    auto *plot = app.add_subcommand("plot", "Render a trajectories CSV as SVG");
    std::string csv_path, svg_path, aggregate = "best";
    plot->add_option("csv", csv_path, "Trajectories CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("-o,--out", svg_path, "Output SVG")->required();
    plot->add_option("--aggregate", aggregate, "median or best")
        ->check(CLI::IsMember({"median", "best"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::optional<std::filesystem::path> path;
            if (!run_config.empty())
                path = run_config;
            const ExperimentConfig config = load_config(path, overrides);
            ExperimentOptions options;
            options.compute_oracle = !no_oracle;
            const RunArtifacts artifacts = run_experiment(config, options);
            const auto summary = make_summary(artifacts, config);
            std::cout << "baseline_value " << artifacts.baseline_value << "\n";
            for (const auto &[name, entry] : summary["methods"].items()) {
                std::cout << name;
                if (entry.contains("crossings"))
                    std::cout << "  median crossing@0.9 " << entry["crossings"]["0.9"]["median"]
                              << "  final(best) " << entry["final_normalized_best"];
                std::cout << "  completed " << entry["completed_runs"] << "\n";
            }
            std::cout << "csv " << artifacts.csv_path.string() << "\n"
                      << "transcript " << artifacts.transcript_path.string() << "\n"
                      << "summary " << artifacts.summary_path.string() << "\n";
        } else if (baseline->parsed()) {
            const Problem problem = resolve(baseline_flags);
            const auto &cfg = problem.config;
            const SolverResult result = multi_start_best(
                baseline_solver(cfg.objective, cfg.wmmse_options(), cfg.dinkelbach_options()),
                *problem.channel, starts.value_or(cfg.baseline_starts), cfg.baseline_seed);
            std::cout << to_json(result).dump(2) << "\n";
        } else if (oracle->parsed()) {
            const Problem problem = resolve(oracle_flags);
            const SolverResult result = grid_oracle(problem.config.objective, *problem.channel,
                                                    points.value_or(problem.config.grid_points));
            std::cout << to_json(result).dump(2) << "\n";
        } else if (plot->parsed()) {
            emit_svg_plot(csv_path, svg_path, aggregate_from_string(aggregate));
            std::cout << svg_path << "\n";
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
