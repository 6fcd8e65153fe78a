//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

// Sweeps mock proposer parameters and prints the median first-crossing
// iteration of each coordination policy. Used to pick the frozen defaults.

#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "swarmopt/config.hpp"
#include "swarmopt/experiment.hpp"

using namespace swarmopt;

int main(int argc, char **argv) {
    CLI::App app{"Mock proposer calibration sweep"};
    std::vector<double> sigmas{0.1}, explores{0.15}, hallucs{0.05};
    std::vector<std::string> objectives{"SE", "EE"};
    std::vector<std::uint64_t> channel_seeds{1};
    std::size_t n_agents = 5, n_iterations = 500, n_seeds = 10;
    double threshold = 0.9;
    app.add_option("--sigma", sigmas);
    app.add_option("--explore", explores);
    app.add_option("--halluc", hallucs);
    app.add_option("--objectives", objectives);
    app.add_option("--channel-seeds", channel_seeds);
    app.add_option("--n-agents", n_agents);
    app.add_option("--n-iterations", n_iterations);
    app.add_option("--n-seeds", n_seeds);
    app.add_option("--threshold", threshold);
    CLI11_PARSE(app, argc, argv);

    std::cout << "channel objective sigma explore halluc | Dynamic Passive None BruteForce\n";
    for (std::uint64_t channel_seed : channel_seeds) {
    for (const auto &obj : objectives) {
        for (double s : sigmas) {
            for (double e : explores) {
                for (double h : hallucs) {
                    ExperimentConfig cfg;
                    cfg.objective = objective_from_string(obj);
                    cfg.channel_seed = channel_seed;
                    cfg.n_agents = n_agents;
                    cfg.n_iterations = n_iterations;
                    cfg.run_seeds.clear();
                    for (std::uint64_t k = 0; k < n_seeds; ++k)
                        cfg.run_seeds.push_back(k);
                    cfg.proposer.mock = {s, e, h, 0};
                    ExperimentOptions opts;
                    opts.write_files = false;
                    opts.compute_oracle = false;
                    const auto art = run_experiment(cfg, opts);
                    std::cout << channel_seed << ' ' << obj << ' ' << s << ' ' << e << ' ' << h << " |";
                    for (Method m : cfg.methods)
                        std::cout << ' '
                                  << median_crossing(art.normalized.at(m), threshold, n_iterations);
                    std::cout << std::endl;
                }
            }
        }
    }
    }
    return 0;
}
