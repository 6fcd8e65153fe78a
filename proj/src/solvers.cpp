//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>

#include "swarmopt/errors.hpp"
#include "swarmopt/random.hpp"

namespace swarmopt {

nlohmann::json to_json(const SolverResult &result) {
    return {
        {"p_star", result.p_star.powers},
        {"value", result.value.value},
        {"objective", std::string(to_string(result.value.objective))},
        {"converged", result.converged},
        {"iterations_used", result.iterations_used},
    };
}

namespace {
    void require_admissible(const ChannelRealization &chan, const PowerAction &p) {
        if (!is_admissible(chan, p))
            throw InvalidArgument("initial point is not admissible for this channel");
    }

    bool all_finite(const std::vector<double> &v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    }

    double total_power(const ChannelRealization &chan, const PowerAction &p) {
        return std::accumulate(p.powers.begin(), p.powers.end(), 0.0)
               + static_cast<double>(chan.n_cells()) * chan.p_circuit();
    }

    PowerAction project(const ChannelRealization &chan, PowerAction p) {
        for (auto &v : p.powers)
            v = std::clamp(v, 0.0, chan.p_max());
        return p;
    }
}  // namespace

SolverResult wmmse_max_se(const ChannelRealization &chan, const PowerAction &p_init,
                          const WmmseOptions &options, const ValueObserver &observer) {
    require_admissible(chan, p_init);
    if (!(options.tol > 0.0))
        throw InvalidArgument("tol must be positive");

    const std::size_t n = chan.n_cells();
    const double v_max = std::sqrt(chan.p_max());

    PowerAction p = p_init;
    double se = spectral_efficiency(chan, p).value;
    if (observer)
        observer(se);

    std::vector<double> v(n), u(n), w(n), h_direct(n);
    for (std::size_t i = 0; i < n; ++i)
        h_direct[i] = std::sqrt(chan.gain(i, i));

    SolverResult result;
    result.iterations_used = 0;
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i)
            v[i] = std::sqrt(p[i]);

        for (std::size_t i = 0; i < n; ++i) {
            double received = chan.noise_power();
            for (std::size_t j = 0; j < n; ++j)
                received += chan.gain(i, j) * v[j] * v[j];
            u[i] = h_direct[i] * v[i] / received;
            w[i] = 1.0 / (1.0 - u[i] * h_direct[i] * v[i]);
        }

        PowerAction next{std::vector<double>(n)};
        for (std::size_t i = 0; i < n; ++i) {
            double denom = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                denom += w[j] * u[j] * u[j] * chan.gain(j, i);
            // All receivers silent: the MSE no longer depends on v_i, restart
            // from full power.
            const double vi = denom > 0.0 ? std::clamp(w[i] * u[i] * h_direct[i] / denom, 0.0, v_max)
                                          : v_max;
            next[i] = vi >= v_max ? chan.p_max() : std::min(vi * vi, chan.p_max());
        }
        if (!all_finite(next.powers) || !all_finite(u) || !all_finite(w))
            throw NumericFailure("WMMSE produced a non-finite iterate", it);

        const double next_se = spectral_efficiency(chan, next).value;
        if (!std::isfinite(next_se))
            throw NumericFailure("WMMSE produced a non-finite rate", it);
        if (observer)
            observer(next_se);

        const double gain = next_se - se;
        p = std::move(next);
        se = next_se;
        result.iterations_used = it;
        if (gain < options.tol) {
            result.converged = true;
            break;
        }
    }

    result.value = spectral_efficiency(chan, p);
    result.p_star = std::move(p);
    return result;
}

double subtracted_objective(const ChannelRealization &chan, double lambda, const PowerAction &p) {
    return spectral_efficiency(chan, p).value - lambda * total_power(chan, p);
}

std::vector<double> subtracted_gradient(const ChannelRealization &chan, double lambda,
                                        const PowerAction &p) {
    auto grad = spectral_efficiency_gradient(chan, p);
    for (auto &g : grad)
        g -= lambda;
    return grad;
}

PowerAction inner_subtracted_max(const ChannelRealization &chan, double lambda,
                                 const PowerAction &p_init, const InnerOptions &options) {
    if (!(lambda >= 0.0))
        throw InvalidArgument("lambda must be non-negative");
    if (p_init.size() != chan.n_cells())
        throw InvalidArgument("initial point has the wrong dimension");

    const std::size_t n = chan.n_cells();
    PowerAction p = project(chan, p_init);
    double f = subtracted_objective(chan, lambda, p);

    for (std::size_t step = 0; step < options.max_steps; ++step) {
        const auto grad = subtracted_gradient(chan, lambda, p);
        if (!all_finite(grad))
            throw NumericFailure("non-finite gradient in projected ascent", step);

        double pg_norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::clamp(p[i] + grad[i], 0.0, chan.p_max()) - p[i];
            pg_norm2 += d * d;
        }
        if (std::sqrt(pg_norm2) < options.grad_tol)
            break;

        bool accepted = false;
        for (double alpha = options.initial_step; alpha > 1e-30; alpha *= options.shrink) {
            PowerAction cand{std::vector<double>(n)};
            double ascent = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cand[i] = std::clamp(p[i] + alpha * grad[i], 0.0, chan.p_max());
                ascent += grad[i] * (cand[i] - p[i]);
            }
            const double f_cand = subtracted_objective(chan, lambda, cand);
            if (f_cand >= f + options.armijo * ascent) {
                p = std::move(cand);
                f = f_cand;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
    }
    return p;
}

SolverResult dinkelbach_max_ee(const ChannelRealization &chan, const PowerAction &p_init,
                               const DinkelbachOptions &options,
                               const DinkelbachObserver &observer) {
    require_admissible(chan, p_init);
    if (!(options.tol > 0.0))
        throw InvalidArgument("tol must be positive");

    PowerAction p = p_init;
    double lambda = energy_efficiency(chan, p).value;

    SolverResult result;
    for (std::size_t t = 1; t <= options.max_outer; ++t) {
        PowerAction next = inner_subtracted_max(chan, lambda, p, options.inner);
        const double residual = subtracted_objective(chan, lambda, next);
        if (!std::isfinite(residual))
            throw NumericFailure("non-finite Dinkelbach residual", t);
        if (observer)
            observer({lambda, residual});

        p = std::move(next);
        result.iterations_used = t;
        if (residual <= options.tol) {
            result.converged = true;
            break;
        }
        lambda = energy_efficiency(chan, p).value;
    }

    result.value = energy_efficiency(chan, p);
    result.p_star = std::move(p);
    return result;
}

SolverResult multi_start_best(const Solver &solver, const ChannelRealization &chan,
                              std::size_t n_starts, std::uint64_t seed) {
    if (n_starts == 0)
        throw InvalidArgument("n_starts must be at least 1");

    Rng rng = make_rng({static_cast<std::uint64_t>(Stream::MultiStart), seed});
    std::vector<PowerAction> starts;
    starts.reserve(n_starts);
    for (std::size_t s = 0; s < n_starts; ++s)
        starts.push_back(random_action(chan, rng));

    std::optional<SolverResult> best;
    std::exception_ptr first_error;
    for (const auto &start : starts) {
        try {
            SolverResult r = solver(chan, start);
            if (!best || r.value.value > best->value.value)
                best = std::move(r);
        } catch (...) {
            if (!first_error)
                first_error = std::current_exception();
        }
    }
    if (!best)
        std::rethrow_exception(first_error);
    return *best;
}

Solver baseline_solver(Objective objective, const WmmseOptions &wmmse,
                       const DinkelbachOptions &dinkelbach) {
    if (objective == Objective::SE) {
        return [wmmse](const ChannelRealization &chan, const PowerAction &p0) {
            return wmmse_max_se(chan, p0, wmmse);
        };
    }
    return [dinkelbach](const ChannelRealization &chan, const PowerAction &p0) {
        return dinkelbach_max_ee(chan, p0, dinkelbach);
    };
}

SolverResult grid_oracle(Objective objective, const ChannelRealization &chan,
                         std::size_t points_per_axis) {
    const std::size_t n = chan.n_cells();
    if (n > 4)
        throw UnsupportedSize("grid oracle supports at most 4 cells, got " + std::to_string(n));
    if (points_per_axis < 2)
        throw InvalidArgument("points_per_axis must be at least 2");

    const double delta = chan.p_max() / static_cast<double>(points_per_axis - 1);
    auto level = [&](std::size_t k) {
        return k + 1 == points_per_axis ? chan.p_max() : static_cast<double>(k) * delta;
    };

    std::vector<std::size_t> index(n, 0);
    PowerAction p{std::vector<double>(n, 0.0)};
    SolverResult best;
    best.value = {-1.0, objective};
    std::size_t visited = 0;
    while (true) {
        for (std::size_t i = 0; i < n; ++i)
            p[i] = level(index[i]);
        const Reward r = evaluate(objective, chan, p);
        ++visited;
        if (r.value > best.value.value) {
            best.value = r;
            best.p_star = p;
        }

        // Odometer increment, last axis fastest.
        std::size_t axis = n;
        while (axis > 0) {
            --axis;
            if (++index[axis] < points_per_axis)
                break;
            index[axis] = 0;
            if (axis == 0) {
                axis = n + 1;
                break;
            }
        }
        if (axis == n + 1)
            break;
    }
    best.iterations_used = visited;
    best.converged = true;
    return best;
}

Trajectory brute_force_trajectory(Objective objective, const ChannelRealization &chan,
                                  std::size_t actions_per_iter, std::size_t n_iter,
                                  std::uint64_t seed, const DrawObserver &observer) {
    if (actions_per_iter == 0)
        throw InvalidArgument("actions_per_iter must be at least 1");

    Rng rng = make_rng({static_cast<std::uint64_t>(Stream::BruteForce), seed});
    Trajectory traj;
    traj.evals_per_iteration = actions_per_iter;
    traj.best_so_far.reserve(n_iter);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> rewards(actions_per_iter);
    for (std::size_t it = 0; it < n_iter; ++it) {
        for (auto &r : rewards) {
            r = evaluate(objective, chan, random_action(chan, rng)).value;
            best = std::max(best, r);
        }
        if (observer)
            observer(it, rewards);
        traj.best_so_far.push_back(best);
    }
    return traj;
}

}  // namespace swarmopt
