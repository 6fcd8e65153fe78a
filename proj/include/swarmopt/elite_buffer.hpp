//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_ELITE_BUFFER_HPP
#define SWARMOPT_ELITE_BUFFER_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "swarmopt/env.hpp"
#include "swarmopt/llm.hpp"

namespace swarmopt {

struct ActionRewardPair {
    PowerAction action;
    double reward = 0.0;
    std::size_t iteration_found = 0;
    std::size_t agent_id = 0;
    Origin origin = Origin::Local;

    friend bool operator==(const ActionRewardPair &, const ActionRewardPair &) = default;
};

// Strict total order used everywhere pairs are ranked: higher reward first,
// then earlier discovery, then lower agent id, then the canonical text.
bool ranks_before(const ActionRewardPair &a, const ActionRewardPair &b);

// Capacity-bounded archive of the best pairs, sorted by ranks_before, with
// at most one pair per canonical 3-decimal action text.
class EliteBuffer {
public:
    explicit EliteBuffer(std::size_t capacity);

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    bool full() const noexcept { return pairs_.size() >= capacity_; }
    std::span<const ActionRewardPair> pairs() const noexcept { return pairs_; }

    // Throws InvalidState when empty.
    const ActionRewardPair &top() const;
    const ActionRewardPair &bottom() const;

    // Merges new pairs, keeps the better of any two sharing an action key and
    // truncates to capacity. Returns every pair that is not retained: dedup
    // losers and pairs pushed past capacity.
    std::vector<ActionRewardPair> insert(std::span<const ActionRewardPair> new_pairs);

    // Checks ordering, capacity and key uniqueness.
    bool invariants_hold() const;

    friend bool operator==(const EliteBuffer &, const EliteBuffer &) = default;

private:
    std::size_t capacity_;
    std::vector<ActionRewardPair> pairs_;
};

std::string action_key(const PowerAction &p);

}  // namespace swarmopt

#endif  // SWARMOPT_ELITE_BUFFER_HPP
