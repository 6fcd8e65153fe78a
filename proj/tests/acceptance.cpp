//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance                    run everything, exit 1 on any failure
//   acceptance --only 3,4         run a subset
//   acceptance --expect-fail 6    tolerate listed failures (reported as XFAIL)
//
// Criterion 10 talks to a live endpoint and only runs with SWARM_OPT_LIVE=1.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "swarmopt/agent.hpp"
#include "swarmopt/config.hpp"
#include "swarmopt/coordinator.hpp"
#include "swarmopt/experiment.hpp"
#include "swarmopt/llm.hpp"
#include "swarmopt/solvers.hpp"

using namespace swarmopt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

constexpr std::uint64_t kInstanceSeeds = 1000;  // instances use seeds 1000..1019

// 1: multi-start local solvers against the exhaustive grid.
Outcome solver_vs_oracle() {
    const auto start = std::chrono::steady_clock::now();
    int se_ok = 0, ee_ok = 0;
    double se_worst = 1e9, ee_worst = 1e9;
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto chan = sample_channel(3, kInstanceSeeds + k);
        const double se = multi_start_best(baseline_solver(Objective::SE), chan, 5, k).value.value;
        const double ee = multi_start_best(baseline_solver(Objective::EE), chan, 5, k).value.value;
        const double se_ref = grid_oracle(Objective::SE, chan, 101).value.value;
        const double ee_ref = grid_oracle(Objective::EE, chan, 101).value.value;
        se_ok += se >= 0.98 * se_ref;
        ee_ok += ee >= 0.98 * ee_ref;
        se_worst = std::min(se_worst, se / se_ref);
        ee_worst = std::min(ee_worst, ee / ee_ref);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {se_ok >= 18 && ee_ok >= 18 && secs < 300.0,
            fmt("WMMSE %d/20, Dinkelbach %d/20 at >=98%% of grid (worst ratios %.4f, %.4f), %.1f s",
                se_ok, ee_ok, se_worst, ee_worst, secs)};
}

// 2: monotone WMMSE objective and Dinkelbach lambda sequence.
Outcome solver_monotonicity() {
    std::size_t se_viol = 0, lambda_viol = 0, unconverged = 0, runs = 0;
    double worst_residual = 0.0, worst_drop = 0.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto chan = sample_channel(3, kInstanceSeeds + k);
        Rng rng = make_rng({77, k});
        for (int s = 0; s < 5; ++s, ++runs) {
            const PowerAction p0 = random_action(chan, rng);
            double prev = -1e300;
            wmmse_max_se(chan, p0, {}, [&](double v) {
                if (v < prev - 1e-9)
                    ++se_viol;
                worst_drop = std::max(worst_drop, prev - v);
                prev = v;
            });
            std::vector<DinkelbachStep> steps;
            const auto res = dinkelbach_max_ee(chan, p0, {}, [&](const DinkelbachStep &st) {
                steps.push_back(st);
            });
            for (std::size_t i = 1; i < steps.size(); ++i)
                lambda_viol += steps[i].lambda < steps[i - 1].lambda;
            if (!res.converged || steps.empty())
                ++unconverged;
            else
                worst_residual = std::max(worst_residual, std::abs(steps.back().residual));
        }
    }
    return {se_viol == 0 && lambda_viol == 0 && unconverged == 0 && worst_residual <= 1e-6,
            fmt("%zu runs: SE decreases %zu (largest drop %.2e), lambda decreases %zu, "
                "unconverged %zu, max |F| %.2e",
                runs, se_viol, std::max(0.0, worst_drop), lambda_viol, unconverged, worst_residual)};
}

// 3: analytic gradient against central differences.
Outcome gradient_check() {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto chan = sample_channel(3, 5000 + k);
        const double lambda = unit(rng);
        PowerAction p{std::vector<double>(3)};
        for (auto &v : p.powers)
            v = 0.05 * chan.p_max() + 0.9 * chan.p_max() * unit(rng);
        const auto g = subtracted_gradient(chan, lambda, p);
        double diff = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double h = 1e-5;
            PowerAction up = p, dn = p;
            up.powers[i] += h;
            dn.powers[i] -= h;
            const double fd = (subtracted_objective(chan, lambda, up) - subtracted_objective(chan, lambda, dn))
                              / (2 * h);
            diff += (g[i] - fd) * (g[i] - fd);
            norm += fd * fd;
        }
        worst = std::max(worst, std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12));
    }
    return {worst <= 1e-4, fmt("100 points, worst relative error %.2e", worst)};
}

// 4: coordinator and buffer invariants.
Outcome coordinator_invariants() {
    std::size_t failures = 0;
    std::size_t ops = 0;

    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> coord(0, 4), reward(0, 8), small(0, 5);
    for (int trial = 0; trial < 250; ++trial) {
        EliteBuffer buf(1 + trial % 12);
        double top = -1.0;
        for (int step = 0; step < 50; ++step, ++ops) {
            std::vector<ActionRewardPair> batch;
            for (int k = small(rng); k > 0; --k) {
                batch.push_back({PowerAction{{coord(rng) * 0.5, coord(rng) * 0.5}}, reward(rng) * 0.25,
                                 static_cast<std::size_t>(small(rng)), static_cast<std::size_t>(small(rng)),
                                 Origin::Local});
                top = std::max(top, batch.back().reward);
            }
            buf.insert(batch);
            failures += !buf.invariants_hold();
            failures += !buf.empty() && buf.top().reward != top;
        }
    }

    const auto chan = sample_channel(3, 4242);
    const MockProposer proposer(kCalibratedMock);
    for (Policy policy : {Policy::Dynamic, Policy::Passive, Policy::None}) {
        std::vector<AgentState> agents;
        for (std::size_t k = 0; k < 5; ++k)
            agents.push_back(init_agent(k, chan, Objective::EE, 5, 20, 3));
        auto state = make_coordinator(policy, 5);
        double pushed = -1.0;
        for (std::size_t t = 1; t <= 60; ++t) {
            std::vector<StepReport> reports;
            for (auto &a : agents)
                reports.push_back(step_agent(a, chan, Objective::EE, proposer, t, 5, 10, policy != Policy::None));
            const auto before = agents;
            sync(state, agents, reports);
            for (std::size_t k = 0; k < agents.size(); ++k) {
                for (const auto &p : reports[k].new_pairs)
                    if (policy == Policy::Passive || reports[k].improved)
                        pushed = std::max(pushed, p.reward);
                if (policy == Policy::Dynamic && reports[k].improved)
                    failures += !(agents[k].buffer == before[k].buffer);
            }
            if (policy == Policy::None)
                failures += !state.global_buffer.empty();
            else if (pushed >= 0.0)
                failures += state.global_buffer.top().reward != pushed;
            failures += !state.global_buffer.invariants_hold();
        }
        if (policy == Policy::None) {
            for (std::size_t k = 0; k < 5; ++k) {
                auto alone = init_agent(k, chan, Objective::EE, 5, 20, 3);
                for (std::size_t t = 1; t <= 60; ++t)
                    step_agent(alone, chan, Objective::EE, proposer, t, 5, 10, false);
                failures += !(alone.buffer == agents[k].buffer);
            }
        }
    }
    return {failures == 0 && ops >= 10000,
            fmt("%zu buffer operations fuzzed, %zu invariant violations", ops, failures)};
}

// 5: identical evaluation budgets, read back from the transcript.
Outcome budget_fairness() {
    const fs::path dir = fs::temp_directory_path() / "swarm_opt_acceptance_budget";
    fs::remove_all(dir);
    ExperimentConfig cfg;
    cfg.n_iterations = 30;
    cfg.run_seeds = {0, 1, 2};
    cfg.log_prompts = false;
    cfg.output_dir = dir.string();
    const auto art = run_experiment(cfg, {.compute_oracle = false});

    std::map<std::pair<std::uint64_t, std::size_t>, std::set<std::size_t>> counts;
    std::set<std::string> methods;
    std::ifstream in(art.transcript_path);
    for (std::string line; std::getline(in, line);) {
        const auto rec = nlohmann::json::parse(line);
        if (rec.at("type") != "iteration")
            continue;
        methods.insert(rec.at("method").get<std::string>());
        counts[{rec.at("seed").get<std::uint64_t>(), rec.at("iteration").get<std::size_t>()}].insert(
            rec.at("cumulative_evaluations").get<std::size_t>());
    }
    std::size_t mismatched = 0;
    for (const auto &[key, c] : counts)
        mismatched += c.size() != 1;
    fs::remove_all(dir);
    return {mismatched == 0 && methods.size() == 4 && counts.size() == 3 * 31,
            fmt("%zu methods, %zu (seed, iteration) points, %zu with differing counts", methods.size(),
                counts.size(), mismatched)};
}

// 6: calibrated ordering of the coordination policies.
Outcome policy_ordering(std::string &extra) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (Objective obj : {Objective::SE, Objective::EE}) {
        ExperimentConfig cfg;
        cfg.objective = obj;
        const auto art = run_experiment(cfg, {.write_files = false, .compute_oracle = false});
        auto med = [&](Method m) { return median_crossing(art.normalized.at(m), 0.9, cfg.n_iterations); };
        const double d = med(Method::Dynamic), p = med(Method::Passive), n = med(Method::None),
                     b = med(Method::BruteForce);
        ok = ok && d < p && d < n && d <= 150;
        detail += fmt("%s Dynamic %.1f Passive %.1f None %.1f (BruteForce %.1f); ",
                      std::string(to_string(obj)).c_str(), d, p, n, b);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    extra = fmt("%.1f s", secs);
    return {ok && secs < 120.0, detail + "median 0.9-crossing, " + extra};
}

// 7: more agents never hurt Dynamic at iteration 50.
Outcome agent_scaling() {
    bool ok = true;
    std::string detail;
    for (Objective obj : {Objective::SE, Objective::EE}) {
        double prev = -1.0;
        detail += std::string(to_string(obj)) + ":";
        for (std::size_t n : {1, 3, 5, 9}) {
            ExperimentConfig cfg;
            cfg.objective = obj;
            cfg.n_agents = n;
            cfg.n_iterations = 50;
            cfg.methods = {Method::Dynamic};
            const auto art = run_experiment(cfg, {.write_files = false, .compute_oracle = false});
            std::vector<double> at50;
            for (const auto &series : art.normalized.at(Method::Dynamic))
                at50.push_back(series.at(50));
            const double m = median(at50);
            ok = ok && m >= prev * 0.99;
            prev = std::max(prev, m);
            detail += fmt(" %zu->%.4f", n, m);
        }
        detail += "; ";
    }
    return {ok, detail + "median normalized reward at iteration 50"};
}

// 8: no prompt ever leaks model vocabulary.
Outcome prompt_purity() {
    static const char *kForbidden[] = {"sinr", "channel", "gain", "log", "interference", "objective function"};
    std::size_t prompts = 0, leaks = 0;
    auto scan = [&](std::string text) {
        ++prompts;
        std::transform(text.begin(), text.end(), text.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        for (const char *w : kForbidden)
            leaks += text.find(w) != std::string::npos;
    };
    const MockProposer proposer(kCalibratedMock);
    for (Objective obj : {Objective::SE, Objective::EE}) {
        for (std::size_t n : {1, 2, 3, 4}) {
            const auto chan = sample_channel(n, 60 + n);
            auto agent = init_agent(0, chan, obj, 5, 20, n);
            for (std::size_t t = 1; t <= 50; ++t)
                scan(step_agent(agent, chan, obj, proposer, t, 1 + t % 6, 1 + t % 12, t % 2).prompt);
        }
    }
    return {leaks == 0, fmt("%zu prompts scanned, %zu forbidden-token hits", prompts, leaks)};
}

// 9: the parser never throws and consumes mock output completely.
Outcome parser_totality() {
    std::mt19937_64 rng(91);
    std::uniform_int_distribution<int> byte(0, 255);
    const std::string alphabet = "power:[], .-+eE0123456789\n\tPOWER";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 300);
    std::size_t thrown = 0, bad = 0;
    for (int k = 0; k < 20000; ++k) {
        std::string text;
        for (std::size_t i = len(rng); i > 0; --i)
            text += k % 2 ? static_cast<char>(byte(rng)) : alphabet[pick(rng)];
        try {
            const auto b = parse_actions(text, 3, 10.0, 5);
            bad += b.actions.size() > 5;
            for (const auto &a : b.actions)
                bad += !is_admissible(sample_channel(3, 1), a);
        } catch (...) {
            ++thrown;
        }
    }
    std::size_t short_batches = 0, failures = 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const std::size_t n = 1 + k % 4;
        const double p_max = 0.5 + 30 * unit(rng);
        std::vector<IclExample> ex;
        for (int e = 0; e < 1 + k % 10; ++e) {
            PowerAction p{std::vector<double>(n)};
            for (auto &v : p.powers)
                v = p_max * unit(rng);
            ex.push_back({p, unit(rng), Origin::Local});
        }
        Rng r = make_rng({9, static_cast<std::uint64_t>(k)});
        const MockParams params{0.001 + unit(rng), unit(rng), unit(rng), 0};
        const std::size_t want = 1 + k % 8;
        const auto b = parse_actions(mock_propose(params, r, ex, want, n, p_max), n, p_max, want);
        short_batches += b.actions.size() != want;
        failures += b.parse_failures;
    }
    return {thrown == 0 && bad == 0 && short_batches == 0 && failures == 0,
            fmt("20000 fuzzed texts: %zu exceptions, %zu bad batches; 2000 mock batches: %zu short, "
                "%zu parse failures",
                thrown, bad, short_batches, failures)};
}

// 10: live endpoint smoke run.
Outcome live_smoke() {
    const fs::path dir = fs::temp_directory_path() / "swarm_opt_acceptance_live";
    fs::remove_all(dir);
    ExperimentConfig cfg;
    cfg.proposer.kind = ProposerKind::Remote;
    if (const char *m = std::getenv("SWARM_OPT_MODEL"))
        cfg.proposer.model_name = m;
    if (const char *u = std::getenv("SWARM_OPT_ENDPOINT"))
        cfg.proposer.endpoint_url = u;
    cfg.methods = {Method::Dynamic};
    cfg.run_seeds = {0};
    cfg.n_iterations = 20;
    cfg.output_dir = dir.string();
    const auto art = run_experiment(cfg, {.compute_oracle = false});
    const auto &run = art.trajectories.at(Method::Dynamic).at(0);
    const bool monotone = std::is_sorted(run.best_so_far.begin(), run.best_so_far.end());
    std::size_t calls = 0;
    std::ifstream in(art.transcript_path);
    for (std::string line; std::getline(in, line);)
        calls += nlohmann::json::parse(line).at("type") == "llm_call";
    return {run.completed && monotone && calls > 0,
            fmt("completed=%d, %zu calls logged, final normalized %.3f, transcript %s", run.completed, calls,
                run.best_so_far.back() / art.baseline_value, art.transcript_path.c_str())};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"swarm-opt acceptance suite"};
    std::vector<int> only, expect_fail;
    app.add_option("--only", only, "criteria to run")->delimiter(',');
    app.add_option("--expect-fail", expect_fail, "criteria whose failure is tolerated")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const char *live = std::getenv("SWARM_OPT_LIVE");
    const bool live_enabled = live != nullptr && std::string(live) == "1";

    std::string scratch;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"solver correctness vs grid oracle", solver_vs_oracle},
        {"WMMSE and Dinkelbach monotonicity", solver_monotonicity},
        {"subtracted-objective gradient check", gradient_check},
        {"coordinator and buffer invariants", coordinator_invariants},
        {"evaluation budget fairness", budget_fairness},
        {"mock-calibrated policy ordering", [&] { return policy_ordering(scratch); }},
        {"agent-count scaling at iteration 50", agent_scaling},
        {"knowledge-free prompts", prompt_purity},
        {"parser totality and mock round-trip", parser_totality},
        {"live endpoint smoke run", live_smoke},
    };

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        const auto &[name, fn] = criteria[i];
        if (id == 10 && !live_enabled) {
            std::printf("SKIP  %2d %s: set SWARM_OPT_LIVE=1 and SWARM_OPT_API_KEY to run\n", id, name.c_str());
            continue;
        }
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception &e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const bool tolerated = std::find(expect_fail.begin(), expect_fail.end(), id) != expect_fail.end();
        const char *tag = out.pass ? "PASS " : (tolerated ? "XFAIL" : "FAIL ");
        if (!out.pass && !tolerated)
            ++unexpected;
        std::printf("%s %2d %s: %s\n", tag, id, name.c_str(), out.detail.c_str());
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
