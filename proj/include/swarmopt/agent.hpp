//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_AGENT_HPP
#define SWARMOPT_AGENT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "swarmopt/elite_buffer.hpp"
#include "swarmopt/env.hpp"
#include "swarmopt/llm.hpp"
#include "swarmopt/random.hpp"

namespace swarmopt {

struct AgentState {
    std::size_t agent_id = 0;
    EliteBuffer buffer{20};
    bool improved_last_step = true;
    double best_reward = 0.0;
    Rng rng;
    std::size_t evaluations = 0;

    // Re-reads best_reward from the buffer top after external inserts.
    void refresh_best();
};

struct AgentOptions {
    std::size_t n_init = 5;
    std::size_t buffer_capacity = 20;
    std::size_t icl_k = 10;
    std::size_t n_actions = 5;
};

// Draws n_init random actions from the agent's init stream, evaluates them
// and seeds the local buffer. The proposer stream is keyed on the same seed.
AgentState init_agent(std::size_t agent_id, const ChannelRealization &chan, Objective objective,
                      std::size_t n_init, std::size_t buffer_capacity, std::uint64_t seed);

// Top min(k, size) pairs as prompt examples.
std::vector<IclExample> select_icl(const EliteBuffer &buffer, std::size_t k);

// Free-function form of EliteBuffer::insert.
std::vector<ActionRewardPair> insert_pairs(EliteBuffer &buffer,
                                           std::span<const ActionRewardPair> new_pairs);

struct StepReport {
    std::size_t agent_id = 0;
    std::size_t iteration = 0;
    std::vector<ActionRewardPair> new_pairs;
    bool improved = false;
    std::size_t parse_failures = 0;
    std::size_t clamped_count = 0;
    std::string prompt;
    std::string raw_text;

    friend bool operator==(const StepReport &, const StepReport &) = default;
};

// One propose-evaluate-store round. Proposer failures are rethrown as
// AgentStepError carrying the agent id and iteration.
StepReport step_agent(AgentState &state, const ChannelRealization &chan, Objective objective,
                      const Proposer &proposer, std::size_t iteration, std::size_t n_actions,
                      std::size_t icl_k, bool collaborative);

}  // namespace swarmopt

#endif  // SWARMOPT_AGENT_HPP
