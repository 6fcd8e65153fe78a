//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_RANDOM_HPP
#define SWARMOPT_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "swarmopt/env.hpp"

namespace swarmopt {

using Rng = std::mt19937_64;

// Named sub-streams so that, e.g., an agent's initial actions and its
// proposer draws never share a sequence.
enum class Stream : std::uint32_t {
    Channel = 1,
    AgentInit = 2,
    Proposer = 3,
    MultiStart = 4,
    BruteForce = 5,
    Jitter = 6,
};

// Seeds a generator from a list of integers through std::seed_seq.
Rng make_rng(std::initializer_list<std::uint64_t> keys);

// Uniform-random action in [0, p_max]^n.
PowerAction random_action(const ChannelRealization &chan, Rng &rng);

}  // namespace swarmopt

#endif  // SWARMOPT_RANDOM_HPP
