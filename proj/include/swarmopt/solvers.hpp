//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_SOLVERS_HPP
#define SWARMOPT_SOLVERS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "swarmopt/env.hpp"

namespace swarmopt {

struct SolverResult {
    PowerAction p_star;
    Reward value;
    std::size_t iterations_used = 0;
    bool converged = false;
};

nlohmann::json to_json(const SolverResult &result);

// Running maximum of the reward, one entry per iteration.
struct Trajectory {
    std::vector<double> best_so_far;
    std::size_t evals_per_iteration = 0;
};

struct WmmseOptions {
    std::size_t max_iter = 1000;
    double tol = 1e-8;
};

// Optional per-iteration hook; receives the SE (bits) of each iterate,
// starting with the initial point.
using ValueObserver = std::function<void(double)>;

// Scalar WMMSE for sum spectral efficiency.
SolverResult wmmse_max_se(const ChannelRealization &chan, const PowerAction &p_init,
                          const WmmseOptions &options = {}, const ValueObserver &observer = {});

struct InnerOptions {
    double initial_step = 1.0;
    double shrink = 0.5;
    double armijo = 1e-4;
    double grad_tol = 1e-8;
    std::size_t max_steps = 10000;
};

// Maximizes SE(p) - lambda * (sum(p) + n * p_circuit) over the power box by
// projected gradient ascent with Armijo backtracking.
PowerAction inner_subtracted_max(const ChannelRealization &chan, double lambda,
                                 const PowerAction &p_init, const InnerOptions &options = {});

// SE(p) - lambda * (sum(p) + n * p_circuit).
double subtracted_objective(const ChannelRealization &chan, double lambda, const PowerAction &p);
std::vector<double> subtracted_gradient(const ChannelRealization &chan, double lambda,
                                        const PowerAction &p);

struct DinkelbachOptions {
    std::size_t max_outer = 50;
    double tol = 1e-8;
    InnerOptions inner;
};

// One outer step of the Dinkelbach loop, reported to observers.
struct DinkelbachStep {
    double lambda;
    double residual;  // SE(p*) - lambda * (sum(p*) + n * p_circuit)
};

using DinkelbachObserver = std::function<void(const DinkelbachStep &)>;

// Dinkelbach fractional programming for energy efficiency.
SolverResult dinkelbach_max_ee(const ChannelRealization &chan, const PowerAction &p_init,
                               const DinkelbachOptions &options = {},
                               const DinkelbachObserver &observer = {});

using Solver = std::function<SolverResult(const ChannelRealization &, const PowerAction &)>;

// Runs the solver from n_starts seeded uniform-random starts and keeps the
// best result (first maximum wins).
SolverResult multi_start_best(const Solver &solver, const ChannelRealization &chan,
                              std::size_t n_starts, std::uint64_t seed);

// The local-optimum baseline matching the objective: WMMSE for SE,
// Dinkelbach for EE.
Solver baseline_solver(Objective objective, const WmmseOptions &wmmse = {},
                       const DinkelbachOptions &dinkelbach = {});

// Exhaustive search over {0, d, ..., p_max}^n, d = p_max / (points - 1).
// Limited to n_cells <= 4.
SolverResult grid_oracle(Objective objective, const ChannelRealization &chan,
                         std::size_t points_per_axis);

// Called once per brute-force iteration with that iteration's rewards.
using DrawObserver = std::function<void(std::size_t iteration, const std::vector<double> &rewards)>;

// Uniform random search with actions_per_iter draws per iteration.
Trajectory brute_force_trajectory(Objective objective, const ChannelRealization &chan,
                                  std::size_t actions_per_iter, std::size_t n_iter,
                                  std::uint64_t seed, const DrawObserver &observer = {});

}  // namespace swarmopt

#endif  // SWARMOPT_SOLVERS_HPP
