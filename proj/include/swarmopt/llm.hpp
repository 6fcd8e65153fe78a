//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_LLM_HPP
#define SWARMOPT_LLM_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swarmopt/env.hpp"
#include "swarmopt/random.hpp"

namespace swarmopt {

// Where a buffered pair came from: the agent's own proposals or the shared
// global buffer.
enum class Origin { Local, Global };

std::string_view to_string(Origin origin);

struct IclExample {
    PowerAction action;
    double reward = 0.0;
    Origin origin = Origin::Local;
};

struct MockParams {
    double exploit_sigma = 0.1;  // fraction of p_max
    double explore_prob = 0.15;
    double halluc_prob = 0.05;
    std::uint64_t seed = 0;

    // Throws InvalidArgument when out of range.
    void validate() const;

    friend bool operator==(const MockParams &, const MockParams &) = default;
};

enum class ProposerKind { Remote, Mock };

std::string_view to_string(ProposerKind kind);
ProposerKind proposer_kind_from_string(std::string_view text);

inline constexpr const char *kApiKeyEnv = "SWARM_OPT_API_KEY";

struct ProposerConfig {
    ProposerKind kind = ProposerKind::Mock;
    std::string model_name = "gpt-3.5-turbo";
    std::string endpoint_url = "https://api.openai.com/v1";
    double temperature = 1.0;
    std::chrono::milliseconds request_timeout{60000};
    int max_retries = 4;
    // Backoff before retry k (1-based) is uniform in [0, retry_base * 2^(k-1)].
    std::chrono::milliseconds retry_base{1000};
    std::size_t max_in_flight = 8;
    MockParams mock;

    void validate() const;

    friend bool operator==(const ProposerConfig &, const ProposerConfig &) = default;
};

struct ProposalBatch {
    std::string raw_text;
    std::vector<PowerAction> actions;
    std::size_t parse_failures = 0;
    std::size_t clamped_count = 0;
};

// Canonical textual form of a power vector: "[v1, ..., vN]" with three
// decimals. Doubles as the buffer dedup key.
std::string format_powers(const PowerAction &p);

// Renders the knowledge-free proposal prompt. Examples are listed in
// ascending reward order.
std::string render_prompt(std::size_t n_cells, double p_max, std::span<const IclExample> examples,
                          std::size_t n_actions, bool collaborative);

// Extracts up to max_actions `power: [...]` lines. Never throws; malformed
// lines are counted in parse_failures and out-of-range coordinates clamped.
ProposalBatch parse_actions(std::string_view text, std::size_t n_cells, double p_max,
                            std::size_t max_actions);

// Deterministic stand-in for a language model that exploits the best
// examples, explores uniformly and occasionally emits patterned vectors.
std::string mock_propose(const MockParams &params, Rng &rng, std::span<const IclExample> examples,
                         std::size_t n_actions, std::size_t n_cells, double p_max);

// Single-message chat completion against an OpenAI-compatible endpoint.
std::string chat_complete(const ProposerConfig &config, std::string_view prompt);

struct ProposalRequest {
    std::string_view prompt;
    std::span<const IclExample> examples;
    std::size_t n_actions = 0;
    std::size_t n_cells = 0;
    double p_max = 0.0;
};

// Source of raw proposal text. Implementations are stateless; any
// randomness comes from the caller-owned generator.
class Proposer {
public:
    virtual ~Proposer() = default;
    virtual std::string propose(const ProposalRequest &request, Rng &rng) const = 0;
    virtual bool is_remote() const noexcept { return false; }
};

class MockProposer final : public Proposer {
public:
    explicit MockProposer(MockParams params);
    std::string propose(const ProposalRequest &request, Rng &rng) const override;

private:
    MockParams params_;
};

class RemoteProposer final : public Proposer {
public:
    explicit RemoteProposer(ProposerConfig config);
    std::string propose(const ProposalRequest &request, Rng &rng) const override;
    bool is_remote() const noexcept override { return true; }

private:
    ProposerConfig config_;
};

std::shared_ptr<const Proposer> make_proposer(const ProposerConfig &config);

}  // namespace swarmopt

#endif  // SWARMOPT_LLM_HPP
