//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swarmopt/errors.hpp"
#include "swarmopt/llm.hpp"

namespace swarmopt {

void MockParams::validate() const {
    if (!(exploit_sigma > 0.0) || !std::isfinite(exploit_sigma))
        throw InvalidArgument("mock.exploit_sigma must be positive and finite");
    if (!(explore_prob >= 0.0 && explore_prob <= 1.0))
        throw InvalidArgument("mock.explore_prob must be in [0, 1]");
    if (!(halluc_prob >= 0.0 && halluc_prob <= 1.0))
        throw InvalidArgument("mock.halluc_prob must be in [0, 1]");
}

namespace {
    // Integers and repeated-digit decimals such as 3.333.
    double patterned_value(Rng &rng, double p_max) {
        std::uniform_int_distribution<int> digit(0, 9);
        std::bernoulli_distribution coin(0.5);
        const int d = digit(rng);
        const double v = coin(rng) ? static_cast<double>(d) : d * 1.111;
        return std::min(v, p_max);
    }
}  // namespace

std::string mock_propose(const MockParams &params, Rng &rng, std::span<const IclExample> examples,
                         std::size_t n_actions, std::size_t n_cells, double p_max) {
    if (examples.empty())
        throw InvalidArgument("mock proposer needs at least one example");

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return examples[a].reward > examples[b].reward;
    });
    const std::size_t n_top = std::min<std::size_t>(3, order.size());
    for (std::size_t k = 0; k < n_top; ++k) {
        if (examples[order[k]].action.size() != n_cells)
            throw InvalidArgument("example action has the wrong dimension");
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n_top - 1);
    std::normal_distribution<double> noise(0.0, params.exploit_sigma * p_max);

    std::string text;
    PowerAction p{std::vector<double>(n_cells)};
    for (std::size_t line = 0; line < n_actions; ++line) {
        if (unit(rng) < params.halluc_prob) {
            const double v = patterned_value(rng, p_max);
            std::fill(p.powers.begin(), p.powers.end(), v);
        } else if (unit(rng) < params.explore_prob) {
            for (auto &v : p.powers)
                v = unit(rng) * p_max;
        } else {
            const PowerAction &base = examples[order[pick(rng)]].action;
            for (std::size_t i = 0; i < n_cells; ++i)
                p[i] = std::clamp(base[i] + noise(rng), 0.0, p_max);
        }
        text += "power: " + format_powers(p) + "\n";
    }
    return text;
}

MockProposer::MockProposer(MockParams params) : params_(params) {
    params_.validate();
}

std::string MockProposer::propose(const ProposalRequest &request, Rng &rng) const {
    return mock_propose(params_, rng, request.examples, request.n_actions, request.n_cells,
                        request.p_max);
}

}  // namespace swarmopt
