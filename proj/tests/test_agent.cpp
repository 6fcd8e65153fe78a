//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "swarmopt/agent.hpp"
#include "swarmopt/errors.hpp"
#include "swarmopt/solvers.hpp"

using namespace swarmopt;

namespace {

// Proposer that replays fixed text regardless of the prompt.
class ScriptedProposer final : public Proposer {
public:
    explicit ScriptedProposer(std::string text) : text_(std::move(text)) {}
    std::string propose(const ProposalRequest &, Rng &) const override { return text_; }

private:
    std::string text_;
};

class FailingProposer final : public Proposer {
public:
    std::string propose(const ProposalRequest &, Rng &) const override {
        throw TransportError("connection reset", 5);
    }
};

ActionRewardPair pair(std::vector<double> p, double reward, std::size_t iter = 0,
                      std::size_t agent = 0) {
    return {PowerAction{std::move(p)}, reward, iter, agent, Origin::Local};
}

// Naive reference: keep the best-ranked pair per textual key, full sort, cut.
bool ref_before(const ActionRewardPair &a, const ActionRewardPair &b) {
    return std::make_tuple(-a.reward, a.iteration_found, a.agent_id, action_key(a.action))
           < std::make_tuple(-b.reward, b.iteration_found, b.agent_id, action_key(b.action));
}

std::vector<ActionRewardPair> ref_insert(std::vector<ActionRewardPair> held,
                                         const std::vector<ActionRewardPair> &incoming,
                                         std::size_t capacity) {
    std::map<std::string, ActionRewardPair> best;
    held.insert(held.end(), incoming.begin(), incoming.end());
    for (const auto &p : held) {
        const auto key = action_key(p.action);
        auto it = best.find(key);
        if (it == best.end() || ref_before(p, it->second))
            best[key] = p;
    }
    std::vector<ActionRewardPair> out;
    for (auto &[k, p] : best)
        out.push_back(p);
    std::sort(out.begin(), out.end(), ref_before);
    if (out.size() > capacity)
        out.resize(capacity);
    return out;
}

const ChannelRealization &test_channel() {
    static const ChannelRealization chan = sample_channel(3, 5);
    return chan;
}

}  // namespace

TEST_CASE("action_key uses three decimals") {
    CHECK(action_key(PowerAction{{1, 2.5, 0.12345}}) == "[1.000, 2.500, 0.123]");
    CHECK(action_key(PowerAction{{0.0004}}) == action_key(PowerAction{{0.0}}));
}

TEST_CASE("EliteBuffer basic contracts") {
    EliteBuffer buf(3);
    CHECK_THROWS_AS(buf.top(), InvalidState);
    CHECK_THROWS_AS(EliteBuffer(0), InvalidArgument);

    SUBCASE("duplicate action with equal reward leaves the buffer unchanged") {
        buf.insert(std::vector{pair({1, 1}, 2.0, 1, 0)});
        const EliteBuffer before = buf;
        const auto displaced = buf.insert(std::vector{pair({1, 1}, 2.0, 4, 1)});
        CHECK(buf == before);
        CHECK(displaced.size() == 1);
    }
    SUBCASE("dedup keeps the higher reward") {
        buf.insert(std::vector{pair({1, 1}, 2.0)});
        buf.insert(std::vector{pair({1.0001, 1}, 3.0)});
        REQUIRE(buf.size() == 1);
        CHECK(buf.top().reward == 3.0);
    }
    SUBCASE("pair below the minimum of a full buffer is displaced") {
        buf.insert(std::vector{pair({1}, 3.0), pair({2}, 2.0), pair({3}, 1.0)});
        const EliteBuffer before = buf;
        const auto displaced = buf.insert(std::vector{pair({4}, 0.5)});
        CHECK(buf == before);
        REQUIRE(displaced.size() == 1);
        CHECK(displaced[0].reward == 0.5);
    }
    SUBCASE("ties break on iteration then agent") {
        buf.insert(std::vector{pair({1}, 1.0, 5, 0), pair({2}, 1.0, 2, 3), pair({3}, 1.0, 2, 1)});
        CHECK(buf.pairs()[0].action == PowerAction{{3}});
        CHECK(buf.pairs()[1].action == PowerAction{{2}});
        CHECK(buf.pairs()[2].action == PowerAction{{1}});
    }
}

TEST_CASE("EliteBuffer matches a naive reference under fuzzing") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> coord(0, 3);
    std::uniform_int_distribution<int> reward(0, 6);
    std::uniform_int_distribution<int> small(0, 4);
    std::uniform_int_distribution<std::size_t> cap(1, 12);
    std::size_t operations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t capacity = cap(rng);
        EliteBuffer buf(capacity);
        std::vector<ActionRewardPair> ref;
        for (int step = 0; step < 60; ++step) {
            std::vector<ActionRewardPair> batch;
            const int count = small(rng);
            for (int k = 0; k < count; ++k)
                batch.push_back(pair({coord(rng) * 0.5, coord(rng) * 0.25}, reward(rng) * 0.5,
                                     static_cast<std::size_t>(small(rng)),
                                     static_cast<std::size_t>(small(rng))));
            const double prev_top = buf.empty() ? -1.0 : buf.top().reward;
            const auto displaced = buf.insert(batch);
            ++operations;

            ref = ref_insert(ref, batch, capacity);
            REQUIRE(buf.invariants_hold());
            REQUIRE(buf.size() <= capacity);
            REQUIRE(std::equal(buf.pairs().begin(), buf.pairs().end(), ref.begin(), ref.end()));
            double expect_top = prev_top;
            for (const auto &p : batch)
                expect_top = std::max(expect_top, p.reward);
            if (!buf.empty())
                REQUIRE(buf.top().reward == expect_top);
            REQUIRE(displaced.size() <= batch.size() + capacity);
        }
    }
    CHECK(operations >= 10000);
}

TEST_CASE("init_agent") {
    const auto &chan = test_channel();
    SUBCASE("five initial actions, sorted") {
        const auto a = init_agent(0, chan, Objective::EE, 5, 20, 1);
        CHECK(a.buffer.size() == 5);
        CHECK(a.buffer.invariants_hold());
        CHECK(a.best_reward == a.buffer.top().reward);
        CHECK(a.improved_last_step);
        CHECK(a.evaluations == 5);
        for (const auto &p : a.buffer.pairs())
            CHECK(p.reward == evaluate(Objective::EE, chan, p.action).value);
    }
    SUBCASE("single action") {
        const auto a = init_agent(0, chan, Objective::SE, 1, 20, 1);
        REQUIRE(a.buffer.size() == 1);
        CHECK(a.best_reward == evaluate(Objective::SE, chan, a.buffer.top().action).value);
    }
    SUBCASE("distinct seeds or ids give distinct actions") {
        const auto a = init_agent(0, chan, Objective::SE, 5, 20, 1);
        const auto b = init_agent(0, chan, Objective::SE, 5, 20, 2);
        const auto c = init_agent(1, chan, Objective::SE, 5, 20, 1);
        CHECK(a.buffer.pairs()[0].action != b.buffer.pairs()[0].action);
        CHECK(a.buffer.pairs()[0].action != c.buffer.pairs()[0].action);
        CHECK(init_agent(0, chan, Objective::SE, 5, 20, 1).buffer == a.buffer);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(init_agent(0, chan, Objective::SE, 0, 20, 1), InvalidArgument);
        CHECK_THROWS_AS(init_agent(0, chan, Objective::SE, 5, 4, 1), InvalidArgument);
    }
}

TEST_CASE("select_icl") {
    EliteBuffer buf(20);
    CHECK_THROWS_AS(select_icl(buf, 3), InvalidState);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<double> rewards;
    for (int k = 0; k < 20; ++k) {
        const double r = u(rng);
        rewards.push_back(r);
        buf.insert(std::vector{pair({u(rng), u(rng)}, r)});
    }
    std::sort(rewards.rbegin(), rewards.rend());
    const auto top10 = select_icl(buf, 10);
    REQUIRE(top10.size() == 10);
    for (std::size_t k = 0; k < 10; ++k)
        CHECK(top10[k].reward == rewards[k]);
    CHECK(select_icl(buf, 1).at(0).reward == rewards[0]);

    EliteBuffer five(20);
    for (int k = 0; k < 5; ++k)
        five.insert(std::vector{pair({double(k)}, k)});
    CHECK(select_icl(five, 10).size() == 5);
}

TEST_CASE("step_agent improvement is strict") {
    const auto &chan = test_channel();
    auto agent = init_agent(0, chan, Objective::EE, 5, 20, 3);

    SUBCASE("duplicates of the best do not improve") {
        const std::string best = "power: " + action_key(agent.buffer.top().action) + "\n";
        // Re-evaluating the 3-decimal text may land a hair above or below the
        // stored action, so pin the buffer to the rounded action first.
        const auto parsed = parse_actions(best, 3, chan.p_max(), 1).actions.at(0);
        agent.buffer.insert(std::vector{pair(parsed.powers, evaluate(Objective::EE, chan, parsed).value)});
        agent.refresh_best();
        const double before = agent.best_reward;
        const auto report = step_agent(agent, chan, Objective::EE, ScriptedProposer(best + best), 1, 5,
                                       10, false);
        CHECK_FALSE(report.improved);
        CHECK_FALSE(agent.improved_last_step);
        CHECK(agent.best_reward == before);
        CHECK(report.new_pairs.size() == 2);
    }
    SUBCASE("a better action improves") {
        const auto opt = dinkelbach_max_ee(chan, PowerAction{{1, 1, 1}}, {});
        const std::string text = "power: " + action_key(opt.p_star) + "\n";
        const auto report = step_agent(agent, chan, Objective::EE, ScriptedProposer(text), 1, 5, 10, true);
        CHECK(report.improved);
        CHECK(agent.best_reward == report.new_pairs.at(0).reward);
        CHECK(report.prompt.find("collaborating") != std::string::npos);
    }
    SUBCASE("zero parsed actions is a valid non-improving step") {
        const auto report = step_agent(agent, chan, Objective::EE, ScriptedProposer("I cannot help"), 1,
                                       5, 10, false);
        CHECK_FALSE(report.improved);
        CHECK(report.new_pairs.empty());
        CHECK(report.parse_failures == 1);
    }
    SUBCASE("proposer failures carry agent and iteration") {
        try {
            step_agent(agent, chan, Objective::EE, FailingProposer(), 7, 5, 10, false);
            FAIL("expected AgentStepError");
        } catch (const AgentStepError &e) {
            CHECK(e.agent_id() == 0);
            CHECK(e.iteration() == 7);
        }
    }
}

TEST_CASE("step_agent replays byte for byte") {
    const auto &chan = test_channel();
    const MockProposer proposer(MockParams{});
    auto run = [&] {
        auto agent = init_agent(2, chan, Objective::SE, 5, 20, 9);
        std::vector<StepReport> reports;
        double last_best = agent.best_reward;
        for (std::size_t t = 1; t <= 10; ++t) {
            reports.push_back(step_agent(agent, chan, Objective::SE, proposer, t, 5, 10, false));
            CHECK(agent.best_reward >= last_best);
            CHECK(reports.back().improved == (agent.best_reward > last_best));
            last_best = agent.best_reward;
            CHECK(agent.buffer.invariants_hold());
        }
        return reports;
    };
    const auto a = run();
    const auto b = run();
    CHECK(a == b);
}
