//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "swarmopt/errors.hpp"
#include "swarmopt/llm.hpp"

namespace swarmopt {

std::string_view to_string(ProposerKind kind) {
    return kind == ProposerKind::Mock ? "mock" : "remote";
}

ProposerKind proposer_kind_from_string(std::string_view text) {
    std::string lower(text);
    for (auto &c : lower)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "mock")
        return ProposerKind::Mock;
    if (lower == "remote")
        return ProposerKind::Remote;
    throw InvalidArgument("unknown proposer kind '" + std::string(text) + "'");
}

void ProposerConfig::validate() const {
    if (kind == ProposerKind::Remote && (endpoint_url.empty() || model_name.empty()))
        throw InvalidArgument("remote proposer requires endpoint_url and model_name");
    if (!(temperature >= 0.0))
        throw InvalidArgument("temperature must be non-negative");
    if (max_retries < 0)
        throw InvalidArgument("max_retries must be non-negative");
    if (request_timeout.count() <= 0)
        throw InvalidArgument("request_timeout must be positive");
    if (max_in_flight == 0)
        throw InvalidArgument("max_in_flight must be at least 1");
    mock.validate();
}

namespace {
    struct Endpoint {
        std::string origin;  // scheme://host[:port]
        std::string path;    // base path + /chat/completions
    };

    Endpoint split_endpoint(const std::string &url) {
        const std::size_t scheme = url.find("://");
        const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
        const std::size_t slash = url.find('/', host_start);
        Endpoint ep;
        ep.origin = url.substr(0, slash);
        std::string base = slash == std::string::npos ? "" : url.substr(slash);
        while (!base.empty() && base.back() == '/')
            base.pop_back();
        ep.path = base + "/chat/completions";
        return ep;
    }

    bool retryable_status(int status) {
        return status == 429 || status >= 500;
    }

    void backoff(const ProposerConfig &config, int retry) {
        thread_local Rng jitter{std::random_device{}()};
        const double cap = static_cast<double>(config.retry_base.count())
                           * static_cast<double>(1ULL << std::min(retry - 1, 20));
        std::uniform_real_distribution<double> dist(0.0, cap);
        std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(dist(jitter)));
    }
}  // namespace

std::string chat_complete(const ProposerConfig &config, std::string_view prompt) {
    if (config.kind != ProposerKind::Remote)
        throw InvalidArgument("chat_complete requires a remote proposer config");
    config.validate();

    const char *key = std::getenv(kApiKeyEnv);
    if (key == nullptr || *key == '\0')
        throw AuthError(std::string("environment variable ") + kApiKeyEnv + " is not set", 0);

    const Endpoint ep = split_endpoint(config.endpoint_url);
    httplib::Client client(ep.origin);
    const auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(config.request_timeout);
    const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(
        config.request_timeout - timeout_s);
    client.set_connection_timeout(timeout_s.count(), timeout_us.count());
    client.set_read_timeout(timeout_s.count(), timeout_us.count());
    client.set_write_timeout(timeout_s.count(), timeout_us.count());

    const nlohmann::json body = {
        {"model", config.model_name},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", std::string(prompt)}}})},
        {"temperature", config.temperature},
    };
    const std::string payload = body.dump();
    const httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};

    const int max_attempts = config.max_retries + 1;
    std::string last_failure;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        if (attempt > 1)
            backoff(config, attempt - 1);

        auto res = client.Post(ep.path, headers, payload, "application/json");
        if (!res) {
            last_failure = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")",
                            attempt);
        if (retryable_status(res->status)) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw ProtocolError("unexpected HTTP " + std::to_string(res->status), attempt);

        try {
            const auto doc = nlohmann::json::parse(res->body);
            return doc.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception &e) {
            throw ProtocolError(std::string("malformed response body: ") + e.what(), attempt);
        }
    }
    throw TransportError(last_failure, max_attempts);
}

RemoteProposer::RemoteProposer(ProposerConfig config) : config_(std::move(config)) {
    config_.validate();
}

std::string RemoteProposer::propose(const ProposalRequest &request, Rng & /*rng*/) const {
    return chat_complete(config_, request.prompt);
}

std::shared_ptr<const Proposer> make_proposer(const ProposerConfig &config) {
    config.validate();
    if (config.kind == ProposerKind::Mock)
        return std::make_shared<MockProposer>(config.mock);
    return std::make_shared<RemoteProposer>(config);
}

}  // namespace swarmopt
