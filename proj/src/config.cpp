//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <type_traits>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "swarmopt/errors.hpp"

namespace swarmopt {

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Dynamic:
        return "Dynamic";
    case Method::Passive:
        return "Passive";
    case Method::None:
        return "None";
    case Method::BruteForce:
        return "BruteForce";
    }
    return "?";
}

Method method_from_string(std::string_view text) {
    std::string lower(text);
    for (auto &c : lower)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "bruteforce" || lower == "brute_force" || lower == "brute-force")
        return Method::BruteForce;
    switch (policy_from_string(text)) {
    case Policy::Dynamic:
        return Method::Dynamic;
    case Policy::Passive:
        return Method::Passive;
    case Policy::None:
        return Method::None;
    }
    throw InvalidArgument("unknown method");
}

Policy policy_of(Method method) {
    switch (method) {
    case Method::Dynamic:
        return Policy::Dynamic;
    case Method::Passive:
        return Policy::Passive;
    case Method::None:
        return Policy::None;
    case Method::BruteForce:
        break;
    }
    throw InvalidArgument("BruteForce is not a coordination policy");
}

DinkelbachOptions ExperimentConfig::dinkelbach_options() const {
    DinkelbachOptions options;
    options.max_outer = dinkelbach_max_outer;
    options.tol = solver_tol;
    return options;
}

namespace {
    [[noreturn]] void field_error(std::string_view field, const std::string &what) {
        throw ConfigError(std::string(field) + ": " + what);
    }

    void require_positive_count(std::string_view field, std::size_t v) {
        if (v == 0)
            field_error(field, "must be at least 1");
    }

    void require_positive(std::string_view field, double v) {
        if (!(v > 0.0) || !std::isfinite(v))
            field_error(field, "must be a positive finite number");
    }

    static_assert(std::is_same_v<std::size_t, std::uint64_t>, "seeds are read as size_t");

    constexpr auto kMaxSeed = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
}  // namespace

void ExperimentConfig::validate() const {
    require_positive_count("n_cells", n_cells);
    require_positive("p_max", p_max);
    require_positive("noise_power", noise_power);
    if (!(p_circuit >= 0.0) || !std::isfinite(p_circuit))
        field_error("p_circuit", "must be non-negative");
    require_positive_count("n_agents", n_agents);
    require_positive_count("actions_per_step", actions_per_step);
    require_positive_count("n_init", n_init);
    require_positive_count("icl_k", icl_k);
    require_positive_count("local_capacity", local_capacity);
    require_positive_count("global_capacity", global_capacity);
    if (local_capacity < n_init)
        field_error("local_capacity", "must be at least n_init");
    if (methods.empty())
        field_error("methods", "must name at least one method");
    for (std::size_t i = 0; i < methods.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (methods[i] == methods[j])
                field_error("methods", "duplicate method " + std::string(to_string(methods[i])));
        }
    }
    if (run_seeds.empty())
        field_error("run_seeds", "must list at least one seed");
    for (auto s : run_seeds) {
        if (s > kMaxSeed)
            field_error("run_seeds", "seeds must fit in a signed 64-bit integer");
    }
    if (channel_seed > kMaxSeed)
        field_error("channel_seed", "must fit in a signed 64-bit integer");
    if (baseline_seed > kMaxSeed)
        field_error("baseline_seed", "must fit in a signed 64-bit integer");
    if (proposer.mock.seed > kMaxSeed)
        field_error("proposer.mock.seed", "must fit in a signed 64-bit integer");
    if (grid_points < 2)
        field_error("grid_points", "must be at least 2");
    require_positive_count("baseline_starts", baseline_starts);
    require_positive_count("wmmse_max_iter", wmmse_max_iter);
    require_positive_count("dinkelbach_max_outer", dinkelbach_max_outer);
    require_positive("solver_tol", solver_tol);
    try {
        proposer.validate();
    } catch (const InvalidArgument &e) {
        field_error("proposer", e.what());
    }
}

namespace {
    std::string where(const toml::node &node) {
        const auto &src = node.source();
        return " (line " + std::to_string(src.begin.line) + ")";
    }

    // Walks one TOML table, consuming known keys and rejecting the rest.
    class TableReader {
    public:
        TableReader(const toml::table &table, std::string prefix)
            : table_(table), prefix_(std::move(prefix)) {}

        std::string name(std::string_view key) const { return prefix_ + std::string(key); }

        const toml::node *find(std::string_view key) {
            seen_.insert(std::string(key));
            return table_.get(key);
        }

        void read(std::string_view key, std::size_t &out) {
            if (const auto *node = find(key)) {
                const auto v = node->value<std::int64_t>();
                if (!v || !node->is_integer())
                    field_error(name(key), "expected an integer" + where(*node));
                if (*v < 0)
                    field_error(name(key), "must be non-negative" + where(*node));
                out = static_cast<std::size_t>(*v);
            }
        }

        void read(std::string_view key, double &out) {
            if (const auto *node = find(key)) {
                if (!node->is_number())
                    field_error(name(key), "expected a number" + where(*node));
                out = *node->value<double>();
            }
        }

        void read(std::string_view key, bool &out) {
            if (const auto *node = find(key)) {
                if (!node->is_boolean())
                    field_error(name(key), "expected true or false" + where(*node));
                out = *node->value<bool>();
            }
        }

        void read(std::string_view key, std::string &out) {
            if (const auto *node = find(key)) {
                if (!node->is_string())
                    field_error(name(key), "expected a string" + where(*node));
                out = *node->value<std::string>();
            }
        }

        void read(std::string_view key, std::vector<std::string> &out) {
            if (const auto *node = find(key)) {
                const auto *arr = node->as_array();
                if (arr == nullptr)
                    field_error(name(key), "expected an array of strings" + where(*node));
                out.clear();
                for (const auto &item : *arr) {
                    if (!item.is_string())
                        field_error(name(key), "expected an array of strings" + where(item));
                    out.push_back(*item.value<std::string>());
                }
            }
        }

        void read(std::string_view key, std::vector<std::uint64_t> &out) {
            if (const auto *node = find(key)) {
                const auto *arr = node->as_array();
                if (arr == nullptr)
                    field_error(name(key), "expected an array of integers" + where(*node));
                out.clear();
                for (const auto &item : *arr) {
                    const auto v = item.value<std::int64_t>();
                    if (!item.is_integer() || !v || *v < 0)
                        field_error(name(key),
                                    "expected non-negative integers" + where(item));
                    out.push_back(static_cast<std::uint64_t>(*v));
                }
            }
        }

        const toml::table *subtable(std::string_view key) {
            if (const auto *node = find(key)) {
                if (!node->is_table())
                    field_error(name(key), "expected a table" + where(*node));
                return node->as_table();
            }
            return nullptr;
        }

        void reject_unknown() const {
            for (const auto &[key, node] : table_) {
                if (!seen_.contains(std::string(key.str())))
                    throw ConfigError("unknown key '" + name(key.str()) + "'" + where(node));
            }
        }

    private:
        const toml::table &table_;
        std::string prefix_;
        std::set<std::string> seen_;
    };

    template <class E, class F>
    void read_enum(TableReader &reader, std::string_view key, E &out, F &&convert) {
        std::string text;
        if (reader.find(key) == nullptr)
            return;
        reader.read(key, text);
        try {
            out = convert(text);
        } catch (const InvalidArgument &e) {
            field_error(reader.name(key), e.what());
        }
    }

    void read_duration(TableReader &reader, std::string_view key, std::chrono::milliseconds &out) {
        if (reader.find(key) == nullptr)
            return;
        double seconds = 0.0;
        reader.read(key, seconds);
        if (!(seconds >= 0.0) || !std::isfinite(seconds))
            field_error(reader.name(key), "must be a non-negative number of seconds");
        out = std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(seconds * 1000.0)));
    }

    void read_proposer(const toml::table &table, ProposerConfig &proposer) {
        TableReader reader(table, "proposer.");
        read_enum(reader, "kind", proposer.kind, proposer_kind_from_string);
        reader.read("model_name", proposer.model_name);
        reader.read("endpoint_url", proposer.endpoint_url);
        reader.read("temperature", proposer.temperature);
        read_duration(reader, "request_timeout_s", proposer.request_timeout);
        read_duration(reader, "retry_base_s", proposer.retry_base);
        std::size_t retries = static_cast<std::size_t>(proposer.max_retries);
        reader.read("max_retries", retries);
        proposer.max_retries = static_cast<int>(retries);
        reader.read("max_in_flight", proposer.max_in_flight);
        if (const auto *mock = reader.subtable("mock")) {
            TableReader m(*mock, "proposer.mock.");
            m.read("exploit_sigma", proposer.mock.exploit_sigma);
            m.read("explore_prob", proposer.mock.explore_prob);
            m.read("halluc_prob", proposer.mock.halluc_prob);
            m.read("seed", proposer.mock.seed);
            m.reject_unknown();
        }
        reader.reject_unknown();
    }
}  // namespace

ExperimentConfig parse_config(std::string_view toml_text, std::string_view source_name) {
    toml::table root;
    try {
        root = toml::parse(toml_text, source_name);
    } catch (const toml::parse_error &e) {
        const auto &src = e.source();
        throw ConfigError(std::string(source_name) + ":" + std::to_string(src.begin.line) + ":"
                          + std::to_string(src.begin.column) + ": "
                          + std::string(e.description()));
    }

    ExperimentConfig config;
    TableReader reader(root, "");
    read_enum(reader, "objective", config.objective, objective_from_string);
    reader.read("n_cells", config.n_cells);
    reader.read("p_max", config.p_max);
    reader.read("p_circuit", config.p_circuit);
    reader.read("noise_power", config.noise_power);
    reader.read("n_agents", config.n_agents);
    reader.read("n_iterations", config.n_iterations);
    reader.read("actions_per_step", config.actions_per_step);
    reader.read("n_init", config.n_init);
    reader.read("icl_k", config.icl_k);
    reader.read("local_capacity", config.local_capacity);
    reader.read("global_capacity", config.global_capacity);
    if (reader.find("methods") != nullptr) {
        std::vector<std::string> names;
        reader.read("methods", names);
        config.methods.clear();
        for (const auto &n : names) {
            try {
                config.methods.push_back(method_from_string(n));
            } catch (const InvalidArgument &e) {
                field_error("methods", e.what());
            }
        }
    }
    reader.read("channel_seed", config.channel_seed);
    reader.read("run_seeds", config.run_seeds);
    reader.read("grid_points", config.grid_points);
    reader.read("baseline_starts", config.baseline_starts);
    reader.read("baseline_seed", config.baseline_seed);
    reader.read("wmmse_max_iter", config.wmmse_max_iter);
    reader.read("dinkelbach_max_outer", config.dinkelbach_max_outer);
    reader.read("solver_tol", config.solver_tol);
    reader.read("output_dir", config.output_dir);
    reader.read("log_prompts", config.log_prompts);
    if (const auto *proposer = reader.subtable("proposer"))
        read_proposer(*proposer, config.proposer);
    reader.reject_unknown();

    config.validate();
    return config;
}

void apply_overrides(ExperimentConfig &config, const ConfigOverrides &o) {
    try {
        if (o.objective)
            config.objective = objective_from_string(*o.objective);
        if (o.methods) {
            config.methods.clear();
            for (const auto &m : *o.methods)
                config.methods.push_back(method_from_string(m));
        }
        if (o.proposer_kind)
            config.proposer.kind = proposer_kind_from_string(*o.proposer_kind);
    } catch (const InvalidArgument &e) {
        throw ConfigError(e.what());
    }
    if (o.n_cells)
        config.n_cells = *o.n_cells;
    if (o.n_agents)
        config.n_agents = *o.n_agents;
    if (o.n_iterations)
        config.n_iterations = *o.n_iterations;
    if (o.actions_per_step)
        config.actions_per_step = *o.actions_per_step;
    if (o.channel_seed)
        config.channel_seed = *o.channel_seed;
    if (o.run_seeds)
        config.run_seeds = *o.run_seeds;
    if (o.model_name)
        config.proposer.model_name = *o.model_name;
    if (o.endpoint_url)
        config.proposer.endpoint_url = *o.endpoint_url;
    if (o.output_dir)
        config.output_dir = *o.output_dir;
    config.validate();
}

ExperimentConfig load_config(const std::optional<std::filesystem::path> &path,
                             const ConfigOverrides &overrides) {
    ExperimentConfig config;
    if (path) {
        std::ifstream in(*path, std::ios::binary);
        if (!in)
            throw IoError("cannot open config", path->string());
        std::stringstream text;
        text << in.rdbuf();
        config = parse_config(text.str(), path->string());
    }
    apply_overrides(config, overrides);
    return config;
}

namespace {
    toml::array seed_array(const std::vector<std::uint64_t> &seeds) {
        toml::array arr;
        for (auto s : seeds)
            arr.push_back(static_cast<std::int64_t>(s));
        return arr;
    }

    double seconds(std::chrono::milliseconds ms) {
        return static_cast<double>(ms.count()) / 1000.0;
    }
}  // namespace

std::string dump_config(const ExperimentConfig &c) {
    toml::array methods;
    for (auto m : c.methods)
        methods.push_back(std::string(to_string(m)));

    toml::table mock{
        {"exploit_sigma", c.proposer.mock.exploit_sigma},
        {"explore_prob", c.proposer.mock.explore_prob},
        {"halluc_prob", c.proposer.mock.halluc_prob},
        {"seed", static_cast<std::int64_t>(c.proposer.mock.seed)},
    };
    toml::table proposer{
        {"kind", std::string(to_string(c.proposer.kind))},
        {"model_name", c.proposer.model_name},
        {"endpoint_url", c.proposer.endpoint_url},
        {"temperature", c.proposer.temperature},
        {"request_timeout_s", seconds(c.proposer.request_timeout)},
        {"retry_base_s", seconds(c.proposer.retry_base)},
        {"max_retries", static_cast<std::int64_t>(c.proposer.max_retries)},
        {"max_in_flight", static_cast<std::int64_t>(c.proposer.max_in_flight)},
        {"mock", std::move(mock)},
    };
    toml::table root{
        {"objective", std::string(to_string(c.objective))},
        {"n_cells", static_cast<std::int64_t>(c.n_cells)},
        {"p_max", c.p_max},
        {"p_circuit", c.p_circuit},
        {"noise_power", c.noise_power},
        {"n_agents", static_cast<std::int64_t>(c.n_agents)},
        {"n_iterations", static_cast<std::int64_t>(c.n_iterations)},
        {"actions_per_step", static_cast<std::int64_t>(c.actions_per_step)},
        {"n_init", static_cast<std::int64_t>(c.n_init)},
        {"icl_k", static_cast<std::int64_t>(c.icl_k)},
        {"local_capacity", static_cast<std::int64_t>(c.local_capacity)},
        {"global_capacity", static_cast<std::int64_t>(c.global_capacity)},
        {"methods", std::move(methods)},
        {"channel_seed", static_cast<std::int64_t>(c.channel_seed)},
        {"run_seeds", seed_array(c.run_seeds)},
        {"grid_points", static_cast<std::int64_t>(c.grid_points)},
        {"baseline_starts", static_cast<std::int64_t>(c.baseline_starts)},
        {"baseline_seed", static_cast<std::int64_t>(c.baseline_seed)},
        {"wmmse_max_iter", static_cast<std::int64_t>(c.wmmse_max_iter)},
        {"dinkelbach_max_outer", static_cast<std::int64_t>(c.dinkelbach_max_outer)},
        {"solver_tol", c.solver_tol},
        {"output_dir", c.output_dir},
        {"log_prompts", c.log_prompts},
        {"proposer", std::move(proposer)},
    };
    std::ostringstream out;
    out << root << "\n";
    return out.str();
}

nlohmann::json to_json(const ExperimentConfig &c) {
    std::vector<std::string> methods;
    for (auto m : c.methods)
        methods.emplace_back(to_string(m));
    return {
        {"objective", std::string(to_string(c.objective))},
        {"n_cells", c.n_cells},
        {"p_max", c.p_max},
        {"p_circuit", c.p_circuit},
        {"noise_power", c.noise_power},
        {"n_agents", c.n_agents},
        {"n_iterations", c.n_iterations},
        {"actions_per_step", c.actions_per_step},
        {"n_init", c.n_init},
        {"icl_k", c.icl_k},
        {"local_capacity", c.local_capacity},
        {"global_capacity", c.global_capacity},
        {"methods", methods},
        {"channel_seed", c.channel_seed},
        {"run_seeds", c.run_seeds},
        {"grid_points", c.grid_points},
        {"baseline_starts", c.baseline_starts},
        {"baseline_seed", c.baseline_seed},
        {"wmmse_max_iter", c.wmmse_max_iter},
        {"dinkelbach_max_outer", c.dinkelbach_max_outer},
        {"solver_tol", c.solver_tol},
        {"output_dir", c.output_dir},
        {"log_prompts", c.log_prompts},
        {"proposer",
         {
             {"kind", std::string(to_string(c.proposer.kind))},
             {"model_name", c.proposer.model_name},
             {"endpoint_url", c.proposer.endpoint_url},
             {"temperature", c.proposer.temperature},
             {"request_timeout_s", seconds(c.proposer.request_timeout)},
             {"retry_base_s", seconds(c.proposer.retry_base)},
             {"max_retries", c.proposer.max_retries},
             {"max_in_flight", c.proposer.max_in_flight},
             {"mock",
              {
                  {"exploit_sigma", c.proposer.mock.exploit_sigma},
                  {"explore_prob", c.proposer.mock.explore_prob},
                  {"halluc_prob", c.proposer.mock.halluc_prob},
                  {"seed", c.proposer.mock.seed},
              }},
         }},
    };
}

}  // namespace swarmopt
