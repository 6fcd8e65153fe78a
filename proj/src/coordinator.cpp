//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/coordinator.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <string>

#include "swarmopt/errors.hpp"

namespace swarmopt {

std::string_view to_string(Policy policy) {
    switch (policy) {
    case Policy::Dynamic:
        return "Dynamic";
    case Policy::Passive:
        return "Passive";
    case Policy::None:
        return "None";
    }
    return "?";
}

Policy policy_from_string(std::string_view text) {
    std::string lower(text);
    for (auto &c : lower)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "dynamic")
        return Policy::Dynamic;
    if (lower == "passive")
        return Policy::Passive;
    if (lower == "none")
        return Policy::None;
    throw InvalidArgument("unknown policy '" + std::string(text) + "'");
}

CoordinatorState make_coordinator(Policy policy, std::size_t n_agents,
                                  std::size_t global_capacity) {
    return CoordinatorState{policy, EliteBuffer(global_capacity),
                            std::vector<std::size_t>(n_agents, 0),
                            std::vector<std::size_t>(n_agents, 0)};
}

nlohmann::json to_json(const SyncRecord &record) {
    return {
        {"iteration", record.iteration},
        {"pushes", record.pushes},
        {"pops", record.pops},
        {"global_top_reward", record.global_top_reward},
        {"global_buffer_size", record.global_buffer_size},
    };
}

namespace {
    std::vector<ActionRewardPair> as_global(std::span<const ActionRewardPair> pairs) {
        std::vector<ActionRewardPair> out(pairs.begin(), pairs.end());
        for (auto &p : out)
            p.origin = Origin::Global;
        return out;
    }

    void pull_global(const CoordinatorState &coord, AgentState &agent) {
        const auto elites = coord.global_buffer.pairs();
        agent.buffer.insert(elites);
        agent.refresh_best();
    }
}  // namespace

SyncRecord sync(CoordinatorState &coord, std::span<AgentState> agents,
                std::span<const StepReport> reports) {
    if (agents.size() != reports.size())
        throw InvalidArgument("sync needs exactly one report per agent");
    if (coord.push_count.size() != agents.size())
        throw InvalidArgument("coordinator was built for a different number of agents");
    for (std::size_t k = 0; k < agents.size(); ++k) {
        if (reports[k].agent_id != agents[k].agent_id)
            throw InvalidArgument("report " + std::to_string(k) + " belongs to agent "
                                  + std::to_string(reports[k].agent_id));
        if (reports[k].iteration != reports[0].iteration)
            throw InvalidArgument("reports come from different iterations");
    }

    SyncRecord record;
    record.iteration = reports.empty() ? 0 : reports[0].iteration;

    switch (coord.policy) {
    case Policy::None:
        break;

    case Policy::Dynamic:
        for (std::size_t k = 0; k < agents.size(); ++k) {
            if (!reports[k].improved)
                continue;
            std::vector<ActionRewardPair> admitted;
            for (const auto &pair : reports[k].new_pairs) {
                if (!coord.global_buffer.full() || pair.reward > coord.global_buffer.bottom().reward)
                    admitted.push_back(pair);
            }
            if (admitted.empty())
                continue;
            coord.global_buffer.insert(as_global(admitted));
            ++coord.push_count[k];
            record.pushes.push_back(agents[k].agent_id);
        }
        if (!coord.global_buffer.empty()) {
            for (std::size_t k = 0; k < agents.size(); ++k) {
                if (reports[k].improved)
                    continue;
                pull_global(coord, agents[k]);
                ++coord.pop_count[k];
                record.pops.push_back(agents[k].agent_id);
            }
        }
        break;

    case Policy::Passive:
        for (std::size_t k = 0; k < agents.size(); ++k) {
            if (reports[k].new_pairs.empty())
                continue;
            coord.global_buffer.insert(as_global(reports[k].new_pairs));
            ++coord.push_count[k];
            record.pushes.push_back(agents[k].agent_id);
        }
        if (!coord.global_buffer.empty()) {
            for (std::size_t k = 0; k < agents.size(); ++k) {
                pull_global(coord, agents[k]);
                ++coord.pop_count[k];
                record.pops.push_back(agents[k].agent_id);
            }
        }
        break;
    }

    record.global_buffer_size = coord.global_buffer.size();
    record.global_top_reward = coord.global_buffer.empty() ? 0.0 : coord.global_buffer.top().reward;
    return record;
}

double best_so_far(std::span<const AgentState> agents, const CoordinatorState &coord) {
    if (agents.empty())
        throw InvalidState("best_so_far needs at least one agent");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto &agent : agents) {
        if (!agent.buffer.empty())
            best = std::max(best, agent.buffer.top().reward);
    }
    if (!coord.global_buffer.empty())
        best = std::max(best, coord.global_buffer.top().reward);
    return best;
}

}  // namespace swarmopt
