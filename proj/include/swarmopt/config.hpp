//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_CONFIG_HPP
#define SWARMOPT_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swarmopt/coordinator.hpp"
#include "swarmopt/env.hpp"
#include "swarmopt/llm.hpp"
#include "swarmopt/solvers.hpp"

namespace swarmopt {

// The three coordination policies plus uniform random search.
enum class Method { Dynamic, Passive, None, BruteForce };

std::string_view to_string(Method method);
Method method_from_string(std::string_view text);
Policy policy_of(Method method);  // InvalidArgument for BruteForce

// Mock behaviour frozen for experiments. Tighter exploitation than the bare
// MockParams defaults, which saturate every policy within a couple of steps.
inline constexpr MockParams kCalibratedMock{0.01, 0.05, 0.05, 0};

struct ExperimentConfig {
    Objective objective = Objective::EE;
    std::size_t n_cells = 3;
    double p_max = 10.0;
    double p_circuit = 1.0;
    double noise_power = 1.0;

    std::size_t n_agents = 5;
    std::size_t n_iterations = 500;
    std::size_t actions_per_step = 5;
    std::size_t n_init = 5;
    std::size_t icl_k = 10;
    std::size_t local_capacity = 20;
    std::size_t global_capacity = 10;
    std::vector<Method> methods = {Method::Dynamic, Method::Passive, Method::None,
                                   Method::BruteForce};

    ProposerConfig proposer{.mock = kCalibratedMock};

    std::uint64_t channel_seed = 1;
    std::vector<std::uint64_t> run_seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::size_t grid_points = 101;

    std::size_t baseline_starts = 5;
    std::uint64_t baseline_seed = 0;
    std::size_t wmmse_max_iter = 1000;
    std::size_t dinkelbach_max_outer = 50;
    double solver_tol = 1e-8;

    std::string output_dir = "swarm_out";
    bool log_prompts = true;

    ChannelParams channel_params() const { return {noise_power, p_max, p_circuit}; }
    WmmseOptions wmmse_options() const { return {wmmse_max_iter, solver_tol}; }
    DinkelbachOptions dinkelbach_options() const;

    // Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

// Command-line values that take precedence over the file.
struct ConfigOverrides {
    std::optional<std::string> objective;
    std::optional<std::size_t> n_cells;
    std::optional<std::size_t> n_agents;
    std::optional<std::size_t> n_iterations;
    std::optional<std::size_t> actions_per_step;
    std::optional<std::vector<std::string>> methods;
    std::optional<std::uint64_t> channel_seed;
    std::optional<std::vector<std::uint64_t>> run_seeds;
    std::optional<std::string> proposer_kind;
    std::optional<std::string> model_name;
    std::optional<std::string> endpoint_url;
    std::optional<std::string> output_dir;
};

// Parses a strict TOML document: unknown keys are errors. An empty document
// yields all defaults.
ExperimentConfig parse_config(std::string_view toml_text, std::string_view source_name = "config");

// Reads the file when a path is given, then applies the overrides.
ExperimentConfig load_config(const std::optional<std::filesystem::path> &path,
                             const ConfigOverrides &overrides = {});

void apply_overrides(ExperimentConfig &config, const ConfigOverrides &overrides);

// Canonical TOML rendering; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig &config);

nlohmann::json to_json(const ExperimentConfig &config);

}  // namespace swarmopt

#endif  // SWARMOPT_CONFIG_HPP
