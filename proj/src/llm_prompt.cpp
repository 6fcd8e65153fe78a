//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "swarmopt/errors.hpp"
#include "swarmopt/llm.hpp"

namespace swarmopt {

std::string_view to_string(Origin origin) {
    return origin == Origin::Local ? "local" : "global";
}

namespace {
    std::string fixed3(double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return buf;
    }

    // Shortest "%g"-style rendering for bounds in the task statement.
    std::string compact(double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }

    std::string placeholder_list(std::size_t n_cells) {
        std::string out = "[";
        for (std::size_t i = 0; i < n_cells; ++i) {
            if (i > 0)
                out += ", ";
            out += "v" + std::to_string(i + 1);
        }
        return out + "]";
    }
}  // namespace

std::string format_powers(const PowerAction &p) {
    std::string out = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += fixed3(p[i]);
    }
    return out + "]";
}

std::string render_prompt(std::size_t n_cells, double p_max, std::span<const IclExample> examples,
                          std::size_t n_actions, bool collaborative) {
    if (examples.empty())
        throw InvalidArgument("render_prompt needs at least one example");
    if (n_actions == 0)
        throw InvalidArgument("n_actions must be at least 1");

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return examples[a].reward < examples[b].reward;
    });

    const std::string n_text = std::to_string(n_cells);
    const std::string k_text = std::to_string(n_actions);

    std::string prompt;
    prompt += "You are an optimizer working on a black-box task. Your task is to choose a "
              "transmit power value for each of "
              + n_text + " transmitters, each a real number between 0 and " + compact(p_max)
              + ". Your goal is to maximize the reward.\n\n";
    prompt += "Below are previous power choices and the reward each one achieved. They are "
              "listed in ascending order of reward, so the best choices come last.";
    if (collaborative) {
        prompt += " Some of these choices were discovered by other optimizers collaborating "
                  "with you, and they are the most effective choices found so far among all "
                  "optimizers.";
    }
    prompt += "\n\n";
    for (std::size_t idx : order) {
        prompt += "power: " + format_powers(examples[idx].action)
                  + ", reward: " + fixed3(examples[idx].reward) + "\n";
    }
    prompt += "\nPropose " + k_text
              + (n_actions == 1 ? " new power choice" : " new power choices")
              + " that differ from all choices above and achieve a higher reward than any of "
                "them. Output exactly "
              + k_text + (n_actions == 1 ? " line" : " lines") + ", each formatted exactly as "
              + "`power: " + placeholder_list(n_cells) + "` with " + n_text
              + " numbers, and nothing else.\n";
    return prompt;
}

}  // namespace swarmopt
