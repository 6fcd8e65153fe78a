//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_COORDINATOR_HPP
#define SWARMOPT_COORDINATOR_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swarmopt/agent.hpp"
#include "swarmopt/elite_buffer.hpp"

namespace swarmopt {

// Dynamic: improving agents push, stalled agents pull the global elites.
// Passive: everyone pushes and everyone pulls every iteration.
// None: agents never exchange pairs.
enum class Policy { Dynamic, Passive, None };

std::string_view to_string(Policy policy);
Policy policy_from_string(std::string_view text);

struct CoordinatorState {
    Policy policy = Policy::Dynamic;
    EliteBuffer global_buffer{10};
    std::vector<std::size_t> push_count;
    std::vector<std::size_t> pop_count;
};

CoordinatorState make_coordinator(Policy policy, std::size_t n_agents,
                                  std::size_t global_capacity = 10);

struct SyncRecord {
    std::size_t iteration = 0;
    std::vector<std::size_t> pushes;  // agent ids
    std::vector<std::size_t> pops;
    double global_top_reward = 0.0;  // 0 while the global buffer is empty
    std::size_t global_buffer_size = 0;
};

nlohmann::json to_json(const SyncRecord &record);

// Serial barrier run after every agent finished iteration t. reports[k]
// must belong to agents[k].
SyncRecord sync(CoordinatorState &coord, std::span<AgentState> agents,
                std::span<const StepReport> reports);

// Best reward held anywhere: every local buffer and the global buffer.
double best_so_far(std::span<const AgentState> agents, const CoordinatorState &coord);

}  // namespace swarmopt

#endif  // SWARMOPT_COORDINATOR_HPP
