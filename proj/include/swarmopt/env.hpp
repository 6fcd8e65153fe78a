//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SWARMOPT_ENV_HPP
#define SWARMOPT_ENV_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace swarmopt {

enum class Objective { SE, EE };

std::string_view to_string(Objective objective);
// Accepts "SE"/"EE" (case-insensitive).
Objective objective_from_string(std::string_view text);

struct ChannelParams {
    double noise_power = 1.0;
    double p_max = 10.0;
    double p_circuit = 1.0;

    friend bool operator==(const ChannelParams &, const ChannelParams &) = default;
};

// One interference-channel instance. gain(i, j) is the power gain from
// transmitter j into receiver i. Immutable after construction.
class ChannelRealization {
public:
    // Throws InvalidArgument unless gains is n_cells^2 row-major, finite,
    // non-negative with a positive diagonal, noise_power > 0, p_max > 0 and
    // p_circuit >= 0.
    ChannelRealization(std::size_t n_cells, std::vector<double> gains, ChannelParams params,
                       std::uint64_t seed = 0);

    std::size_t n_cells() const noexcept { return n_cells_; }
    double gain(std::size_t rx, std::size_t tx) const noexcept { return gains_[rx * n_cells_ + tx]; }
    std::span<const double> gains() const noexcept { return gains_; }
    double noise_power() const noexcept { return params_.noise_power; }
    double p_max() const noexcept { return params_.p_max; }
    double p_circuit() const noexcept { return params_.p_circuit; }
    const ChannelParams &params() const noexcept { return params_; }
    std::uint64_t seed() const noexcept { return seed_; }

    friend bool operator==(const ChannelRealization &, const ChannelRealization &) = default;

private:
    std::size_t n_cells_;
    std::vector<double> gains_;
    ChannelParams params_;
    std::uint64_t seed_;
};

// Unit-variance Rayleigh power gains |h|^2, h ~ CN(0, 1).
ChannelRealization sample_channel(std::size_t n_cells, std::uint64_t seed, ChannelParams params = {});

// Transmit powers in Watts, one per cell.
struct PowerAction {
    std::vector<double> powers;

    std::size_t size() const noexcept { return powers.size(); }
    double operator[](std::size_t i) const noexcept { return powers[i]; }
    double &operator[](std::size_t i) noexcept { return powers[i]; }

    friend bool operator==(const PowerAction &, const PowerAction &) = default;
};

// True when the action has n_cells entries, each finite and in [0, p_max].
bool is_admissible(const ChannelRealization &chan, const PowerAction &p) noexcept;

struct Reward {
    double value = 0.0;
    Objective objective = Objective::SE;
};

// Per-receiver signal-to-interference-plus-noise ratio.
std::vector<double> sinr(const ChannelRealization &chan, const PowerAction &p);

// Sum of log2(1 + SINR_i), bits/s/Hz.
Reward spectral_efficiency(const ChannelRealization &chan, const PowerAction &p);

// Sum spectral efficiency over total consumed power (transmit + n * circuit).
Reward energy_efficiency(const ChannelRealization &chan, const PowerAction &p);

Reward evaluate(Objective objective, const ChannelRealization &chan, const PowerAction &p);

// Gradient of sum SE (bits) with respect to the transmit powers.
std::vector<double> spectral_efficiency_gradient(const ChannelRealization &chan,
                                                 const PowerAction &p);

nlohmann::json to_json(const ChannelRealization &chan);
ChannelRealization channel_from_json(const nlohmann::json &doc);

}  // namespace swarmopt

#endif  // SWARMOPT_ENV_HPP
