//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "swarmopt/errors.hpp"
#include "swarmopt/llm.hpp"

using namespace swarmopt;

namespace {

std::string read_fixture(const std::string &name) {
    std::ifstream in(std::string(SWARMOPT_TEST_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string completion_body(const std::string &content) {
    return nlohmann::json{{"choices", {{{"index", 0},
                                        {"message", {{"role", "assistant"}, {"content", content}}}}}}}
        .dump();
}

// Local endpoint that serves a scripted sequence of (status, body) responses.
class FakeEndpoint {
public:
    explicit FakeEndpoint(std::vector<std::pair<int, std::string>> script)
        : script_(std::move(script)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request &req, httplib::Response &res) {
            const std::size_t k = std::min<std::size_t>(hits_++, script_.size() - 1);
            last_auth_ = req.get_header_value("Authorization");
            last_body_ = req.body;
            res.status = script_[k].first;
            res.set_content(script_[k].second, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint() {
        server_.stop();
        thread_.join();
    }

    ProposerConfig config() const {
        ProposerConfig c;
        c.kind = ProposerKind::Remote;
        c.endpoint_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
        c.request_timeout = std::chrono::milliseconds(5000);
        c.retry_base = std::chrono::milliseconds(5);
        c.max_retries = 2;
        return c;
    }
    std::size_t hits() const { return hits_; }
    const std::string &last_auth() const { return last_auth_; }
    const std::string &last_body() const { return last_body_; }

private:
    httplib::Server server_;
    std::vector<std::pair<int, std::string>> script_;
    std::atomic<std::size_t> hits_{0};
    std::string last_auth_;
    std::string last_body_;
    int port_ = 0;
    std::thread thread_;
};

struct ApiKey {
    explicit ApiKey(const char *value) {
        if (value)
            ::setenv(kApiKeyEnv, value, 1);
        else
            ::unsetenv(kApiKeyEnv);
    }
    ~ApiKey() { ::unsetenv(kApiKeyEnv); }
};

}  // namespace

TEST_CASE("chat_complete returns the first choice content") {
    ApiKey key("test-key");
    FakeEndpoint ep({{200, completion_body("power: [1, 2, 3]")}});
    CHECK(chat_complete(ep.config(), "hello") == "power: [1, 2, 3]");
    CHECK(ep.hits() == 1);
    CHECK(ep.last_auth() == "Bearer test-key");

    const auto sent = nlohmann::json::parse(ep.last_body());
    CHECK(sent.at("model") == "gpt-3.5-turbo");
    CHECK(sent.at("temperature") == 1.0);
    REQUIRE(sent.at("messages").size() == 1);
    CHECK(sent.at("messages")[0].at("role") == "user");
    CHECK(sent.at("messages")[0].at("content") == "hello");
}

TEST_CASE("recorded fixture content is extracted verbatim") {
    ApiKey key("test-key");
    const std::string body = read_fixture("chat_completion_response.json");
    const auto expected = nlohmann::json::parse(body)["choices"][0]["message"]["content"].get<std::string>();
    FakeEndpoint ep({{200, body}});
    const auto text = chat_complete(ep.config(), "prompt");
    CHECK(text == expected);
    const auto batch = parse_actions(text, 3, 10.0, 5);
    CHECK(batch.actions.size() == 5);
    CHECK(batch.parse_failures == 0);
}

TEST_CASE("429 then 200 costs exactly one retry") {
    ApiKey key("test-key");
    FakeEndpoint ep({{429, R"({"error":"rate limited"})"}, {200, completion_body("ok")}});
    CHECK(chat_complete(ep.config(), "p") == "ok");
    CHECK(ep.hits() == 2);
}

TEST_CASE("server errors exhaust retries into a transport error") {
    ApiKey key("test-key");
    FakeEndpoint ep({{503, "unavailable"}});
    try {
        chat_complete(ep.config(), "p");
        FAIL("expected TransportError");
    } catch (const TransportError &e) {
        CHECK(e.attempts() == 3);
    }
    CHECK(ep.hits() == 3);
}

TEST_CASE("rejected credentials are not retried") {
    ApiKey key("bad-key");
    FakeEndpoint ep({{401, R"({"error":"invalid key"})"}});
    try {
        chat_complete(ep.config(), "p");
        FAIL("expected AuthError");
    } catch (const AuthError &e) {
        CHECK(e.attempts() == 1);
    }
    CHECK(ep.hits() == 1);
}

TEST_CASE("malformed bodies are protocol errors") {
    ApiKey key("test-key");
    SUBCASE("not json") {
        FakeEndpoint ep({{200, "<html>oops</html>"}});
        CHECK_THROWS_AS(chat_complete(ep.config(), "p"), ProtocolError);
    }
    SUBCASE("no choices") {
        FakeEndpoint ep({{200, R"({"choices": []})"}});
        CHECK_THROWS_AS(chat_complete(ep.config(), "p"), ProtocolError);
    }
    SUBCASE("unexpected status") {
        FakeEndpoint ep({{404, "{}"}});
        CHECK_THROWS_AS(chat_complete(ep.config(), "p"), ProtocolError);
    }
}

TEST_CASE("missing key fails before any request") {
    ApiKey key(nullptr);
    FakeEndpoint ep({{200, completion_body("x")}});
    try {
        chat_complete(ep.config(), "p");
        FAIL("expected AuthError");
    } catch (const AuthError &e) {
        CHECK(e.attempts() == 0);
    }
    CHECK(ep.hits() == 0);
}

TEST_CASE("unreachable endpoint is a transport error") {
    ApiKey key("test-key");
    ProposerConfig c;
    c.kind = ProposerKind::Remote;
    {
        // Grab a free port, then release it so nothing is listening.
        httplib::Server probe;
        const int port = probe.bind_to_any_port("127.0.0.1");
        c.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    }
    c.request_timeout = std::chrono::milliseconds(500);
    c.retry_base = std::chrono::milliseconds(1);
    c.max_retries = 1;
    CHECK_THROWS_AS(chat_complete(c, "p"), TransportError);
}
