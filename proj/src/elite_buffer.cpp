//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/elite_buffer.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "swarmopt/errors.hpp"

namespace swarmopt {

std::string action_key(const PowerAction &p) {
    return format_powers(p);
}

bool ranks_before(const ActionRewardPair &a, const ActionRewardPair &b) {
    if (a.reward != b.reward)
        return a.reward > b.reward;
    if (a.iteration_found != b.iteration_found)
        return a.iteration_found < b.iteration_found;
    if (a.agent_id != b.agent_id)
        return a.agent_id < b.agent_id;
    return action_key(a.action) < action_key(b.action);
}

EliteBuffer::EliteBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0)
        throw InvalidArgument("buffer capacity must be at least 1");
}

const ActionRewardPair &EliteBuffer::top() const {
    if (pairs_.empty())
        throw InvalidState("buffer is empty");
    return pairs_.front();
}

const ActionRewardPair &EliteBuffer::bottom() const {
    if (pairs_.empty())
        throw InvalidState("buffer is empty");
    return pairs_.back();
}

std::vector<ActionRewardPair> EliteBuffer::insert(std::span<const ActionRewardPair> new_pairs) {
    std::vector<ActionRewardPair> displaced;
    if (new_pairs.empty())
        return displaced;

    std::vector<ActionRewardPair> merged = pairs_;
    std::unordered_map<std::string, std::size_t> slot;
    slot.reserve(merged.size() + new_pairs.size());
    for (std::size_t i = 0; i < merged.size(); ++i)
        slot.emplace(action_key(merged[i].action), i);

    for (const auto &pair : new_pairs) {
        auto [it, fresh] = slot.emplace(action_key(pair.action), merged.size());
        if (fresh) {
            merged.push_back(pair);
        } else if (ranks_before(pair, merged[it->second])) {
            displaced.push_back(std::move(merged[it->second]));
            merged[it->second] = pair;
        } else {
            displaced.push_back(pair);
        }
    }

    std::sort(merged.begin(), merged.end(), ranks_before);
    if (merged.size() > capacity_) {
        std::move(merged.begin() + static_cast<std::ptrdiff_t>(capacity_), merged.end(),
                  std::back_inserter(displaced));
        merged.resize(capacity_);
    }
    pairs_ = std::move(merged);
    return displaced;
}

bool EliteBuffer::invariants_hold() const {
    if (pairs_.size() > capacity_)
        return false;
    for (std::size_t i = 1; i < pairs_.size(); ++i) {
        if (!ranks_before(pairs_[i - 1], pairs_[i]))
            return false;
    }
    std::unordered_set<std::string> keys;
    for (const auto &p : pairs_) {
        if (!keys.insert(action_key(p.action)).second)
            return false;
    }
    return true;
}

}  // namespace swarmopt
