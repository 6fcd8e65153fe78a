//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/env.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "swarmopt/errors.hpp"
#include "swarmopt/random.hpp"

namespace swarmopt {

std::string_view to_string(Objective objective) {
    return objective == Objective::SE ? "SE" : "EE";
}

Objective objective_from_string(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "SE")
        return Objective::SE;
    if (upper == "EE")
        return Objective::EE;
    throw InvalidArgument("unknown objective '" + std::string(text) + "' (expected SE or EE)");
}

ChannelRealization::ChannelRealization(std::size_t n_cells, std::vector<double> gains,
                                       ChannelParams params, std::uint64_t seed)
    : n_cells_(n_cells), gains_(std::move(gains)), params_(params), seed_(seed) {
    if (n_cells_ == 0)
        throw InvalidArgument("n_cells must be at least 1");
    if (gains_.size() != n_cells_ * n_cells_)
        throw InvalidArgument("gain matrix must have n_cells^2 entries");
    for (std::size_t i = 0; i < n_cells_; ++i) {
        for (std::size_t j = 0; j < n_cells_; ++j) {
            const double g = gain(i, j);
            if (!std::isfinite(g) || g < 0.0)
                throw InvalidArgument("gains must be finite and non-negative");
            if (i == j && g <= 0.0)
                throw InvalidArgument("direct-link gains must be positive");
        }
    }
    if (!(params_.noise_power > 0.0) || !std::isfinite(params_.noise_power))
        throw InvalidArgument("noise_power must be positive");
    if (!(params_.p_max > 0.0) || !std::isfinite(params_.p_max))
        throw InvalidArgument("p_max must be positive");
    if (!(params_.p_circuit >= 0.0) || !std::isfinite(params_.p_circuit))
        throw InvalidArgument("p_circuit must be non-negative");
}

ChannelRealization sample_channel(std::size_t n_cells, std::uint64_t seed, ChannelParams params) {
    if (n_cells == 0)
        throw InvalidArgument("n_cells must be at least 1");

    Rng rng = make_rng({static_cast<std::uint64_t>(Stream::Channel), seed});
    // Real and imaginary parts each carry half of the unit power.
    std::normal_distribution<double> component(0.0, std::sqrt(0.5));
    std::vector<double> gains(n_cells * n_cells);
    for (auto &g : gains) {
        do {
            const double re = component(rng);
            const double im = component(rng);
            g = re * re + im * im;
        } while (g == 0.0);
    }
    return ChannelRealization(n_cells, std::move(gains), params, seed);
}

bool is_admissible(const ChannelRealization &chan, const PowerAction &p) noexcept {
    if (p.size() != chan.n_cells())
        return false;
    return std::all_of(p.powers.begin(), p.powers.end(), [&](double v) {
        return std::isfinite(v) && v >= 0.0 && v <= chan.p_max();
    });
}

namespace {
    void check_dimensions(const ChannelRealization &chan, const PowerAction &p) {
        if (p.size() != chan.n_cells())
            throw InvalidArgument("power vector has " + std::to_string(p.size())
                                  + " entries, channel has " + std::to_string(chan.n_cells())
                                  + " cells");
    }
}  // namespace

std::vector<double> sinr(const ChannelRealization &chan, const PowerAction &p) {
    check_dimensions(chan, p);
    const std::size_t n = chan.n_cells();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double interference = chan.noise_power();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i)
                interference += chan.gain(i, j) * p[j];
        }
        out[i] = chan.gain(i, i) * p[i] / interference;
    }
    return out;
}

Reward spectral_efficiency(const ChannelRealization &chan, const PowerAction &p) {
    double total = 0.0;
    for (double s : sinr(chan, p))
        total += std::log2(1.0 + s);
    return {total, Objective::SE};
}

Reward energy_efficiency(const ChannelRealization &chan, const PowerAction &p) {
    const double se = spectral_efficiency(chan, p).value;
    double consumed = static_cast<double>(chan.n_cells()) * chan.p_circuit();
    for (double v : p.powers)
        consumed += v;
    return {se / consumed, Objective::EE};
}

Reward evaluate(Objective objective, const ChannelRealization &chan, const PowerAction &p) {
    return objective == Objective::SE ? spectral_efficiency(chan, p) : energy_efficiency(chan, p);
}

std::vector<double> spectral_efficiency_gradient(const ChannelRealization &chan,
                                                 const PowerAction &p) {
    check_dimensions(chan, p);
    const std::size_t n = chan.n_cells();
    // log(1 + SINR_i) = log(total_i) - log(interference_i)
    std::vector<double> total(n), interference(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = chan.noise_power();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i)
                acc += chan.gain(i, j) * p[j];
        }
        interference[i] = acc;
        total[i] = acc + chan.gain(i, i) * p[i];
    }
    std::vector<double> grad(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double g = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            g += chan.gain(i, k) / total[i];
            if (i != k)
                g -= chan.gain(i, k) / interference[i];
        }
        grad[k] = g / std::numbers::ln2;
    }
    return grad;
}

nlohmann::json to_json(const ChannelRealization &chan) {
    return {
        {"n_cells", chan.n_cells()},
        {"gains", std::vector<double>(chan.gains().begin(), chan.gains().end())},
        {"noise_power", chan.noise_power()},
        {"p_max", chan.p_max()},
        {"p_circuit", chan.p_circuit()},
        {"seed", chan.seed()},
    };
}

ChannelRealization channel_from_json(const nlohmann::json &doc) {
    try {
        ChannelParams params;
        params.noise_power = doc.at("noise_power").get<double>();
        params.p_max = doc.at("p_max").get<double>();
        params.p_circuit = doc.at("p_circuit").get<double>();
        return ChannelRealization(doc.at("n_cells").get<std::size_t>(),
                                  doc.at("gains").get<std::vector<double>>(), params,
                                  doc.value("seed", std::uint64_t{0}));
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("malformed channel document: ") + e.what());
    }
}

}  // namespace swarmopt
