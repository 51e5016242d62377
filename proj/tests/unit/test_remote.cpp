// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>
#include <httplib.h>

#include <cstdlib>
#include <mutex>
#include <thread>

#include "langsim/backend/remote.hpp"

using namespace langsim::backend;
using nlohmann::json;

namespace {

/// Chat-completion endpoint returning a canned assistant message.
class StubEndpoint {
  public:
    StubEndpoint() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lk(mutex_);
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            res.status = status_;
            res.set_content(json{{"choices", json::array({{{"message", {{"content", reply_}}}}})}}.dump(),
                            "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubEndpoint() {
        server_.stop();
        thread_.join();
    }

    void reply(std::string content, int status = 200) {
        std::lock_guard lk(mutex_);
        reply_ = std::move(content);
        status_ = status;
    }
    std::string last_body() {
        std::lock_guard lk(mutex_);
        return last_body_;
    }
    std::string last_auth() {
        std::lock_guard lk(mutex_);
        return last_auth_;
    }
    RemoteBackendConfig config() const {
        auto cfg = RemoteBackendConfig::with_default_templates();
        cfg.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
        cfg.timeout = std::chrono::milliseconds(2000);
        cfg.api_key_env = "LANGSIM_TEST_KEY";
        return cfg;
    }

  private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::mutex mutex_;
    std::string reply_;
    int status_ = 200;
    std::string last_body_, last_auth_;
};

DecisionRequest sim_request() {
    return {AgentKind::sim, {"2D-LDFT-isotherm", "2D-LDFT-hysteresis"}, {"older text", "compute the isotherm"},
            std::nullopt};
}

}  // namespace

TEST_SUITE("remote") {

TEST_CASE("first json object is found inside prose") {
    auto j = first_json_object(R"(Sure! {"action": "a}b", "x": {"y": 1}} trailing {"z":2})");
    REQUIRE(j);
    CHECK((*j)["action"] == "a}b");
    CHECK_FALSE(first_json_object("no braces"));
    CHECK_FALSE(first_json_object("{not json}"));
    CHECK((*first_json_object("{bad} then {\"ok\":true}"))["ok"] == true);
}

TEST_CASE("action replies map onto the vocabulary") {
    auto req = sim_request();
    auto sel = parse_action_reply(R"({"action":"2D-LDFT-isotherm"})", req);
    REQUIRE(sel.selected());
    CHECK(sel.label() == "2D-LDFT-isotherm");
    CHECK_FALSE(parse_action_reply(R"({"action":"hint"})", req).selected());
    CHECK_THROWS_AS(parse_action_reply("I think maybe the isotherm", req), MalformedAction);
    CHECK_THROWS_AS(parse_action_reply(R"({"action":"3D-LDFT-isotherm"})", req), MalformedAction);
    CHECK_THROWS_AS(parse_action_reply(R"({"label":"2D-LDFT-isotherm"})", req), MalformedAction);
    CHECK_THROWS_AS(parse_action_reply(R"({"action":7})", req), MalformedAction);
}

TEST_CASE("prompts substitute placeholders and drop old context to fit") {
    DecisionRequest req{AgentKind::input_state, {"known", "unknown"}, {"alpha beta", "gamma"}, "temperature"};
    auto p = render_prompt(req, "L={labels} C={context}");
    CHECK(p == "L=known, unknown (input: temperature) C=alpha beta\ngamma");
    auto tight = render_prompt(req, "L={labels} C={context}", 7);
    CHECK(tight == "L=known, unknown (input: temperature) C=gamma");

    RemoteBackendConfig cfg;
    cfg.templates[AgentKind::type] = "no placeholders";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("stub endpoint: well-formed, hint, malformed and out-of-vocabulary replies") {
    StubEndpoint stub;
    auto cfg = stub.config();
    auto req = sim_request();

    stub.reply(R"({"action":"2D-LDFT-hysteresis"})");
    auto d = remote_classify(req, cfg);
    REQUIRE(d.selected());
    CHECK(d.label() == "2D-LDFT-hysteresis");
    auto body = json::parse(stub.last_body());
    CHECK(body["model"] == cfg.model);
    auto prompt = body["messages"][0]["content"].get<std::string>();
    CHECK(prompt.find("2D-LDFT-isotherm, 2D-LDFT-hysteresis") != std::string::npos);
    CHECK(prompt.find("compute the isotherm") != std::string::npos);

    stub.reply("Here you go: {\"action\": \"hint\"}");
    CHECK_FALSE(remote_classify(req, cfg).selected());

    stub.reply("I think maybe...");
    CHECK_THROWS_AS(remote_classify(req, cfg), MalformedAction);
    stub.reply(R"({"action":"CGMD"})");
    CHECK_THROWS_AS(remote_classify(req, cfg), MalformedAction);
    stub.reply(R"({"action":"2D-LDFT-isotherm"})", 503);
    CHECK_THROWS_AS(remote_classify(req, cfg), BackendUnavailable);

    RemoteBackend adapter(cfg);
    for (const char* bad : {"I think maybe...", R"({"action":"CGMD"})", "{}", R"({"action":"hint"})"}) {
        stub.reply(bad);
        auto out = adapter.decide(req, {});
        CHECK_FALSE(out.selected());
        CHECK(out.hint_text() == "Please choose one of: 2D-LDFT-isotherm, 2D-LDFT-hysteresis.");
    }
    CHECK(adapter.last_error().empty());  // the last reply was a proper hint
    stub.reply(R"({"action":"2D-LDFT-isotherm"})");
    CHECK(adapter.decide(req, {}).label() == "2D-LDFT-isotherm");
    CHECK_FALSE(adapter.pattern_input_state());
}

TEST_CASE("bearer token comes from the configured environment variable") {
    StubEndpoint stub;
    auto cfg = stub.config();
    stub.reply(R"({"action":"known"})");
    DecisionRequest req{AgentKind::input_state, {"known", "unknown"}, {"300 K"}, "temperature"};
    ::unsetenv("LANGSIM_TEST_KEY");
    CHECK(remote_classify(req, cfg).label() == "known");
    CHECK(stub.last_auth().empty());
    ::setenv("LANGSIM_TEST_KEY", "sekret", 1);
    remote_classify(req, cfg);
    CHECK(stub.last_auth() == "Bearer sekret");
    ::unsetenv("LANGSIM_TEST_KEY");
}

TEST_CASE("unreachable or unsupported endpoints are unavailable, and the adapter hints") {
    auto cfg = RemoteBackendConfig::with_default_templates();
    cfg.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.timeout = std::chrono::milliseconds(300);
    CHECK_THROWS_AS(remote_classify(sim_request(), cfg), BackendUnavailable);
    cfg.endpoint = "https://example.invalid/v1";
    CHECK_THROWS_AS(remote_classify(sim_request(), cfg), BackendUnavailable);
    RemoteBackend adapter(cfg);
    CHECK_FALSE(adapter.decide(sim_request(), {}).selected());
    CHECK_FALSE(adapter.last_error().empty());
}

}
