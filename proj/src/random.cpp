//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/random.hpp"

#include <vector>

namespace swarmopt {

Rng make_rng(std::initializer_list<std::uint64_t> keys) {
    std::vector<std::uint32_t> words;
    words.reserve(keys.size() * 2);
    for (std::uint64_t k : keys) {
        words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

PowerAction random_action(const ChannelRealization &chan, Rng &rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PowerAction p{std::vector<double>(chan.n_cells())};
    for (auto &v : p.powers)
        v = unit(rng) * chan.p_max();
    return p;
}

}  // namespace swarmopt
