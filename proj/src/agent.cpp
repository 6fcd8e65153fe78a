//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/agent.hpp"

#include <algorithm>
#include <exception>
#include <limits>

#include "swarmopt/errors.hpp"

namespace swarmopt {

void AgentState::refresh_best() {
    if (!buffer.empty())
        best_reward = buffer.top().reward;
}

AgentState init_agent(std::size_t agent_id, const ChannelRealization &chan, Objective objective,
                      std::size_t n_init, std::size_t buffer_capacity, std::uint64_t seed) {
    if (n_init == 0)
        throw InvalidArgument("n_init must be at least 1");
    if (buffer_capacity < n_init)
        throw InvalidArgument("buffer_capacity must be at least n_init");

    AgentState state{
        .agent_id = agent_id,
        .buffer = EliteBuffer(buffer_capacity),
        .improved_last_step = true,
        .best_reward = 0.0,
        .rng = make_rng({static_cast<std::uint64_t>(Stream::Proposer), seed, agent_id}),
        .evaluations = 0,
    };

    Rng init_rng = make_rng({static_cast<std::uint64_t>(Stream::AgentInit), seed, agent_id});
    std::vector<ActionRewardPair> initial;
    initial.reserve(n_init);
    for (std::size_t k = 0; k < n_init; ++k) {
        PowerAction p = random_action(chan, init_rng);
        const double reward = evaluate(objective, chan, p).value;
        initial.push_back({std::move(p), reward, 0, agent_id, Origin::Local});
    }
    state.evaluations = n_init;
    state.buffer.insert(initial);
    state.refresh_best();
    return state;
}

std::vector<IclExample> select_icl(const EliteBuffer &buffer, std::size_t k) {
    if (buffer.empty())
        throw InvalidState("cannot select examples from an empty buffer");
    const auto pairs = buffer.pairs();
    const std::size_t count = std::min(k, pairs.size());
    std::vector<IclExample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back({pairs[i].action, pairs[i].reward, pairs[i].origin});
    return out;
}

std::vector<ActionRewardPair> insert_pairs(EliteBuffer &buffer,
                                           std::span<const ActionRewardPair> new_pairs) {
    return buffer.insert(new_pairs);
}

StepReport step_agent(AgentState &state, const ChannelRealization &chan, Objective objective,
                      const Proposer &proposer, std::size_t iteration, std::size_t n_actions,
                      std::size_t icl_k, bool collaborative) {
    StepReport report;
    report.agent_id = state.agent_id;
    report.iteration = iteration;

    const auto examples = select_icl(state.buffer, icl_k);
    report.prompt = render_prompt(chan.n_cells(), chan.p_max(), examples, n_actions, collaborative);

    try {
        ProposalRequest request{report.prompt, examples, n_actions, chan.n_cells(), chan.p_max()};
        report.raw_text = proposer.propose(request, state.rng);
    } catch (const std::exception &e) {
        throw AgentStepError(e.what(), state.agent_id, iteration);
    }

    ProposalBatch batch = parse_actions(report.raw_text, chan.n_cells(), chan.p_max(), n_actions);
    report.parse_failures = batch.parse_failures;
    report.clamped_count = batch.clamped_count;

    const double best_before = state.best_reward;
    double best_new = -std::numeric_limits<double>::infinity();
    report.new_pairs.reserve(batch.actions.size());
    for (auto &action : batch.actions) {
        const double reward = evaluate(objective, chan, action).value;
        best_new = std::max(best_new, reward);
        report.new_pairs.push_back({std::move(action), reward, iteration, state.agent_id,
                                    Origin::Local});
    }
    state.evaluations += report.new_pairs.size();

    report.improved = !report.new_pairs.empty() && best_new > best_before;
    state.buffer.insert(report.new_pairs);
    state.refresh_best();
    state.improved_last_step = report.improved;
    return report;
}

}  // namespace swarmopt
