//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <exception>
#include <future>
#include <limits>

#include "swarmopt/agent.hpp"
#include "swarmopt/coordinator.hpp"
#include "swarmopt/errors.hpp"
#include "swarmopt/random.hpp"

namespace swarmopt {

TranscriptLog::TranscriptLog(const std::filesystem::path &path)
    : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_)
        throw IoError("cannot open transcript", path.string());
}

void TranscriptLog::write(const nlohmann::json &record) {
    if (!out_.is_open())
        return;
    std::lock_guard lock(mutex_);
    out_ << record.dump() << '\n';
}

std::uint64_t agent_stream_seed(std::uint64_t run_seed, std::uint64_t mock_seed) {
    return run_seed ^ (mock_seed * 0x9E3779B97F4A7C15ULL);
}

namespace {
    nlohmann::json actions_json(const std::vector<ActionRewardPair> &pairs) {
        auto out = nlohmann::json::array();
        for (const auto &p : pairs)
            out.push_back(p.action.powers);
        return out;
    }

    nlohmann::json rewards_json(const std::vector<ActionRewardPair> &pairs) {
        auto out = nlohmann::json::array();
        for (const auto &p : pairs)
            out.push_back(p.reward);
        return out;
    }

    void log_iteration(TranscriptLog *log, const RunTrajectory &traj) {
        if (log == nullptr || !log->enabled())
            return;
        const std::size_t t = traj.best_so_far.size() - 1;
        log->write({{"type", "iteration"},
                    {"method", std::string(to_string(traj.method))},
                    {"seed", traj.seed},
                    {"iteration", t},
                    {"best_so_far", traj.best_so_far[t]},
                    {"cumulative_evaluations", traj.cumulative_evaluations[t]}});
    }

    // Steps every agent once. Remote proposers run up to max_in_flight
    // requests at a time; results are always collected in agent order.
    std::vector<StepReport> step_all(const RunContext &ctx, std::vector<AgentState> &agents,
                                     std::size_t iteration, bool collaborative) {
        const auto &cfg = ctx.config;
        auto step_one = [&](AgentState &agent) {
            return step_agent(agent, ctx.channel, cfg.objective, ctx.proposer, iteration,
                              cfg.actions_per_step, cfg.icl_k, collaborative);
        };

        std::vector<StepReport> reports;
        reports.reserve(agents.size());
        if (!ctx.proposer.is_remote() || cfg.proposer.max_in_flight <= 1) {
            for (auto &agent : agents)
                reports.push_back(step_one(agent));
            return reports;
        }

        const std::size_t batch = cfg.proposer.max_in_flight;
        for (std::size_t start = 0; start < agents.size(); start += batch) {
            const std::size_t end = std::min(agents.size(), start + batch);
            std::vector<std::future<StepReport>> pending;
            for (std::size_t k = start; k < end; ++k)
                pending.push_back(std::async(std::launch::async, step_one, std::ref(agents[k])));
            std::exception_ptr failure;
            for (auto &f : pending) {
                try {
                    reports.push_back(f.get());
                } catch (...) {
                    if (!failure)
                        failure = std::current_exception();
                }
            }
            if (failure)
                std::rethrow_exception(failure);
        }
        return reports;
    }
}  // namespace

RunTrajectory run_policy(const RunContext &ctx, Policy policy, std::uint64_t run_seed) {
    const auto &cfg = ctx.config;
    const std::string method_name(to_string(policy));
    RunTrajectory traj;
    traj.method = policy == Policy::Dynamic   ? Method::Dynamic
                  : policy == Policy::Passive ? Method::Passive
                                              : Method::None;
    traj.seed = run_seed;
    traj.best_so_far.reserve(cfg.n_iterations + 1);
    traj.cumulative_evaluations.reserve(cfg.n_iterations + 1);

    const std::uint64_t seed = agent_stream_seed(run_seed, cfg.proposer.mock.seed);
    std::vector<AgentState> agents;
    agents.reserve(cfg.n_agents);
    for (std::size_t k = 0; k < cfg.n_agents; ++k) {
        agents.push_back(init_agent(k, ctx.channel, cfg.objective, cfg.n_init, cfg.local_capacity, seed));
        if (ctx.log != nullptr && ctx.log->enabled()) {
            const auto pairs = agents.back().buffer.pairs();
            std::vector<ActionRewardPair> initial(pairs.begin(), pairs.end());
            ctx.log->write({{"type", "init"},
                            {"method", method_name},
                            {"seed", run_seed},
                            {"agent_id", k},
                            {"actions", actions_json(initial)},
                            {"rewards", rewards_json(initial)}});
        }
    }
    CoordinatorState coord = make_coordinator(policy, cfg.n_agents, cfg.global_capacity);

    auto record = [&] {
        std::size_t evals = 0;
        for (const auto &a : agents)
            evals += a.evaluations;
        traj.best_so_far.push_back(best_so_far(agents, coord));
        traj.cumulative_evaluations.push_back(evals);
        log_iteration(ctx.log, traj);
    };
    record();

    const bool collaborative = policy != Policy::None;
    for (std::size_t t = 1; t <= cfg.n_iterations; ++t) {
        std::vector<StepReport> reports;
        try {
            reports = step_all(ctx, agents, t, collaborative);
        } catch (const std::exception &e) {
            traj.completed = false;
            traj.error = e.what();
            if (ctx.log != nullptr)
                ctx.log->write({{"type", "error"},
                                {"method", method_name},
                                {"seed", run_seed},
                                {"iteration", t},
                                {"message", traj.error}});
            return traj;
        }

        if (ctx.log != nullptr && ctx.log->enabled()) {
            for (const auto &r : reports) {
                nlohmann::json call = {{"type", "llm_call"},
                                       {"method", method_name},
                                       {"seed", run_seed},
                                       {"iteration", t},
                                       {"agent_id", r.agent_id},
                                       {"response", r.raw_text},
                                       {"parse_failures", r.parse_failures},
                                       {"clamped_count", r.clamped_count}};
                if (cfg.log_prompts)
                    call["prompt"] = r.prompt;
                ctx.log->write(call);
                ctx.log->write({{"type", "agent_step"},
                                {"method", method_name},
                                {"seed", run_seed},
                                {"iteration", t},
                                {"agent_id", r.agent_id},
                                {"actions", actions_json(r.new_pairs)},
                                {"rewards", rewards_json(r.new_pairs)},
                                {"improved", r.improved},
                                {"parse_failures", r.parse_failures},
                                {"clamped_count", r.clamped_count}});
            }
        }

        const SyncRecord sync_record = sync(coord, agents, reports);
        if (ctx.log != nullptr && ctx.log->enabled()) {
            auto rec = to_json(sync_record);
            rec["type"] = "coordinator";
            rec["method"] = method_name;
            rec["seed"] = run_seed;
            ctx.log->write(rec);
        }
        record();
    }
    return traj;
}

RunTrajectory run_brute_force(const RunContext &ctx, std::uint64_t run_seed) {
    const auto &cfg = ctx.config;
    RunTrajectory traj;
    traj.method = Method::BruteForce;
    traj.seed = run_seed;

    auto log_draws = [&](std::size_t iteration, const std::vector<double> &rewards) {
        if (ctx.log != nullptr && ctx.log->enabled())
            ctx.log->write({{"type", "bruteforce_draws"},
                            {"method", "BruteForce"},
                            {"seed", run_seed},
                            {"iteration", iteration},
                            {"rewards", rewards}});
    };

    // Initialization budget mirrors n_agents agents with n_init actions each.
    const std::size_t init_draws = cfg.n_agents * cfg.n_init;
    Rng init_rng = make_rng({static_cast<std::uint64_t>(Stream::BruteForce), run_seed, 0});
    std::vector<double> init_rewards(init_draws);
    double init_best = -std::numeric_limits<double>::infinity();
    for (auto &r : init_rewards) {
        r = evaluate(cfg.objective, ctx.channel, random_action(ctx.channel, init_rng)).value;
        init_best = std::max(init_best, r);
    }
    log_draws(0, init_rewards);
    traj.best_so_far.push_back(init_best);
    traj.cumulative_evaluations.push_back(init_draws);
    log_iteration(ctx.log, traj);

    const std::size_t per_iter = cfg.n_agents * cfg.actions_per_step;
    brute_force_trajectory(cfg.objective, ctx.channel, per_iter, cfg.n_iterations, run_seed,
                           [&](std::size_t it, const std::vector<double> &rewards) {
                               log_draws(it + 1, rewards);
                               double best = traj.best_so_far.back();
                               for (double r : rewards)
                                   best = std::max(best, r);
                               traj.best_so_far.push_back(best);
                               traj.cumulative_evaluations.push_back(
                                   traj.cumulative_evaluations.back() + per_iter);
                               log_iteration(ctx.log, traj);
                           });
    return traj;
}

std::vector<double> normalize_series(const std::vector<double> &series, double baseline_value) {
    if (!(baseline_value > 0.0) || !std::isfinite(baseline_value))
        throw InvalidState("baseline value must be positive to normalize");
    std::vector<double> out(series.size());
    std::transform(series.begin(), series.end(), out.begin(),
                   [&](double v) { return v / baseline_value; });
    return out;
}

std::vector<std::vector<double>> normalize_trajectories(const std::vector<RunTrajectory> &runs,
                                                        double baseline_value) {
    std::vector<std::vector<double>> out;
    out.reserve(runs.size());
    for (const auto &run : runs)
        out.push_back(normalize_series(run.best_so_far, baseline_value));
    return out;
}

std::optional<std::size_t> first_crossing(const std::vector<double> &normalized, double threshold) {
    for (std::size_t t = 0; t < normalized.size(); ++t) {
        if (normalized[t] >= threshold)
            return t;
    }
    return std::nullopt;
}

double median(std::vector<double> values) {
    if (values.empty())
        throw InvalidArgument("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double median_crossing(const std::vector<std::vector<double>> &normalized, double threshold,
                       std::size_t n_iterations) {
    std::vector<double> crossings;
    crossings.reserve(normalized.size());
    for (const auto &series : normalized) {
        const auto c = first_crossing(series, threshold);
        crossings.push_back(static_cast<double>(c.value_or(n_iterations + 1)));
    }
    return median(std::move(crossings));
}

std::string shortest_decimal(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc())
        throw InvalidArgument("cannot format value");
    return std::string(buf, ptr);
}

void write_csv(const RunArtifacts &artifacts, const ExperimentConfig &config,
               const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open CSV for writing", path.string());
    out << "method,seed,iteration,best_so_far,normalized\n";
    for (Method method : config.methods) {
        const auto found = artifacts.trajectories.find(method);
        if (found == artifacts.trajectories.end())
            continue;
        for (const auto &run : found->second) {
            if (!run.completed)
                continue;
            for (std::size_t t = 0; t < run.best_so_far.size(); ++t) {
                const double v = run.best_so_far[t];
                out << to_string(method) << ',' << run.seed << ',' << t << ','
                    << shortest_decimal(v) << ','
                    << shortest_decimal(v / artifacts.baseline_value) << '\n';
            }
        }
    }
    if (!out)
        throw IoError("failed writing CSV", path.string());
}

nlohmann::json make_summary(const RunArtifacts &artifacts, const ExperimentConfig &config) {
    static constexpr double kThresholds[] = {0.9, 0.95, 0.99};

    nlohmann::json methods = nlohmann::json::object();
    nlohmann::json failures = nlohmann::json::array();
    for (Method method : config.methods) {
        const auto found = artifacts.trajectories.find(method);
        if (found == artifacts.trajectories.end())
            continue;
        std::vector<std::vector<double>> completed;
        for (const auto &run : found->second) {
            if (run.completed)
                completed.push_back(normalize_series(run.best_so_far, artifacts.baseline_value));
            else
                failures.push_back({{"method", std::string(to_string(method))},
                                    {"seed", run.seed},
                                    {"error", run.error}});
        }
        nlohmann::json entry = {{"completed_runs", completed.size()}};
        if (!completed.empty()) {
            nlohmann::json crossings = nlohmann::json::object();
            for (double theta : kThresholds) {
                nlohmann::json per_seed = nlohmann::json::array();
                std::optional<std::size_t> best;
                for (const auto &series : completed) {
                    const auto c = first_crossing(series, theta);
                    per_seed.push_back(c ? nlohmann::json(*c) : nlohmann::json(nullptr));
                    if (c && (!best || *c < *best))
                        best = c;
                }
                crossings[shortest_decimal(theta)] = {
                    {"per_seed", per_seed},
                    {"median", median_crossing(completed, theta, config.n_iterations)},
                    {"best", best ? nlohmann::json(*best) : nlohmann::json(nullptr)},
                };
            }
            std::vector<double> finals;
            for (const auto &series : completed)
                finals.push_back(series.back());
            entry["crossings"] = crossings;
            entry["final_normalized_median"] = median(finals);
            entry["final_normalized_best"] = *std::max_element(finals.begin(), finals.end());
        }
        methods[std::string(to_string(method))] = entry;
    }

    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));

    nlohmann::json summary = {
        {"config", to_json(config)},
        {"channel", to_json(artifacts.channel)},
        {"baseline", to_json(artifacts.baseline)},
        {"baseline_value", artifacts.baseline_value},
        {"crossing_never_reached_as", config.n_iterations + 1},
        {"methods", methods},
        {"failures", failures},
        {"generated_at", stamp},
    };
    if (artifacts.oracle)
        summary["oracle"] = to_json(*artifacts.oracle);
    return summary;
}

namespace {
    void write_json(const nlohmann::json &doc, const std::filesystem::path &path) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open for writing", path.string());
        out << doc.dump(2) << '\n';
    }
}  // namespace

RunArtifacts run_experiment(const ExperimentConfig &config, const ExperimentOptions &options) {
    config.validate();

    ChannelRealization channel = sample_channel(config.n_cells, config.channel_seed,
                                                config.channel_params());
    const Solver solver = baseline_solver(config.objective, config.wmmse_options(),
                                          config.dinkelbach_options());
    SolverResult baseline = multi_start_best(solver, channel, config.baseline_starts,
                                             config.baseline_seed);

    RunArtifacts artifacts{
        .channel = channel,
        .baseline = baseline,
        .baseline_value = baseline.value.value,
    };
    if (options.compute_oracle && config.n_cells <= 4)
        artifacts.oracle = grid_oracle(config.objective, channel, config.grid_points);

    const auto proposer = options.proposer ? options.proposer : make_proposer(config.proposer);

    TranscriptLog discard;
    std::unique_ptr<TranscriptLog> transcript;
    if (options.write_files) {
        const std::filesystem::path dir(config.output_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create output directory", dir.string());
        artifacts.transcript_path = dir / "transcript.jsonl";
        artifacts.csv_path = dir / "trajectories.csv";
        artifacts.summary_path = dir / "summary.json";
        transcript = std::make_unique<TranscriptLog>(artifacts.transcript_path);
        write_json(to_json(channel), dir / "channel.json");
    }

    const RunContext ctx{config, channel, *proposer, transcript ? transcript.get() : &discard};
    std::size_t completed = 0;
    for (Method method : config.methods) {
        auto &runs = artifacts.trajectories[method];
        for (std::uint64_t seed : config.run_seeds) {
            runs.push_back(method == Method::BruteForce ? run_brute_force(ctx, seed)
                                                        : run_policy(ctx, policy_of(method), seed));
            if (runs.back().completed)
                ++completed;
        }
        artifacts.normalized[method] = normalize_trajectories(runs, artifacts.baseline_value);
    }
    if (completed == 0)
        throw std::runtime_error("no run completed; see the transcript for proposer errors");

    if (options.write_files) {
        write_csv(artifacts, config, artifacts.csv_path);
        write_json(make_summary(artifacts, config), artifacts.summary_path);
    }
    return artifacts;
}

}  // namespace swarmopt
