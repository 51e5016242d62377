// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>
#include <httplib.h>

#include <thread>

#include "../support/oracles.hpp"
#include "../support/temp_dir.hpp"
#include "langsim/io/csv.hpp"
#include "langsim/pipeline/patterns.hpp"
#include "langsim/service/codec.hpp"
#include "langsim/service/http.hpp"
#include "langsim/service/store.hpp"

using namespace langsim;
using namespace langsim::service;
using nlohmann::json;
using testing_support::TempDir;

namespace {

constexpr const char* pore = "[[1,1,1],[1,0,1],[1,1,1]]";
const std::string one_shot = std::string("mesoscale sorption with 2D LDFT, isotherm at 300 K for ") + pore;

ServiceConfig config_in(const TempDir& dir) {
    ServiceConfig cfg;
    cfg.data_dir = dir.path();
    cfg.workers = 1;
    return cfg;
}

std::vector<std::string> kinds(const std::vector<Event>& ev) {
    std::vector<std::string> out;
    for (const auto& e : ev) out.push_back(std::string(to_string(e.kind)));
    return out;
}

/// Server on an ephemeral port for the lifetime of the object.
struct LiveServer {
    SessionService& service;
    HttpServer http;
    int port;
    std::thread thread;

    explicit LiveServer(SessionService& s) : service(s), http(s), port(http.bind("127.0.0.1", 0)) {
        thread = std::thread([this] { http.serve(); });
    }
    ~LiveServer() {
        http.stop();
        thread.join();
    }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(60, 0);
        return c;
    }
};

}  // namespace

TEST_SUITE("service_http") {

TEST_CASE("sessions get sequential ids and unknown ids are not found") {
    TempDir dir;
    SessionService svc(config_in(dir));
    CHECK(svc.create_session() == "s-000001");
    CHECK(svc.create_session() == "s-000002");
    CHECK_THROWS_AS(svc.post_message("s-999999", "hello"), NotFound);
    CHECK_THROWS_AS(svc.get_run("r-000001"), NotFound);
    CHECK_THROWS_AS(svc.post_message("s-000001", ""), InvalidMessage);
    CHECK(svc.snapshot("s-000001").log.empty());
}

TEST_CASE("small runs finish inside the request and are persisted") {
    TempDir dir;
    std::string id;
    {
        SessionService svc(config_in(dir));
        id = svc.create_session();
        auto reply = svc.post_message(id, one_shot);
        REQUIRE(kinds(reply.events).back() == "result");
        CHECK(reply.events.back().run_id == "r-000001");
        CHECK(linkage_name(reply.linkage) == "sim");
        auto run = svc.get_run("r-000001");
        CHECK(run.status == RunStatus::done);
        CHECK(run.session_id == id);
    }
    SessionService again(config_in(dir));
    CHECK(again.session_ids() == std::vector<std::string>{id});
    CHECK(again.get_run("r-000001").status == RunStatus::done);
    CHECK(again.create_session() == "s-000002");
    auto reply = again.post_message(id, "rerun at 320 K");
    CHECK(reply.events.back().run_id == "r-000002");
}

TEST_CASE("large runs go to the pool and the session is busy meanwhile") {
    TempDir dir;
    auto cfg = config_in(dir);
    cfg.sync_max_side = 2;
    SessionService svc(cfg);
    auto id = svc.create_session();
    std::mt19937 rng(5);
    auto big = oracle::random_matrix(rng, 96, 96, 0.3, false);
    auto reply = svc.post_message(id, "mesoscale sorption 2D LDFT hysteresis at 300 K " + pipeline::serialize_matrix(big));
    REQUIRE(kinds(reply.events).back() == "result");
    CHECK(reply.events.back().pending);
    auto run_id = *reply.events.back().run_id;
    bool busy = false;
    try {
        svc.post_message(id, "hello");
    } catch (const Busy&) {
        busy = true;
    }
    CHECK(busy);
    svc.wait_idle();
    auto s = svc.snapshot(id);
    CHECK_FALSE(s.in_flight);
    CHECK(s.note);
    CHECK(svc.get_run(run_id).status == RunStatus::done);
    CHECK(s.events.rbegin()->second.kind == EventKind::result);
    CHECK_FALSE(s.events.rbegin()->second.pending);
}

TEST_CASE("runs in flight at shutdown are resumed on restart") {
    TempDir dir;
    auto cfg = config_in(dir);
    cfg.sync_max_side = 2;
    std::string id;
    std::mt19937 rng(6);
    auto big = oracle::random_matrix(rng, 20, 20, 0.3, false);
    {
        // The state a crash leaves behind: a pending run recorded, no result.
        backend::LexiconBackend lexicon;
        Dialogue d(router::default_landscape());
        auto s = new_session("s-000001", router::default_landscape().hierarchy);
        auto posted = d.post(s, "mesoscale sorption 2D LDFT isotherm at 300 K " + pipeline::serialize_matrix(big),
                             lexicon, [] { return std::string("r-000001"); });
        REQUIRE(posted.job);
        d.mark_pending(s, *posted.job);
        SessionStore store(dir.path());
        store.save_run(pending_run(*posted.job));
        store.save(s, 0);
        id = s.id;
    }
    SessionService svc(cfg);
    svc.wait_idle();
    auto s = svc.snapshot(id);
    CHECK_FALSE(s.in_flight);
    CHECK(svc.get_run("r-000001").status == RunStatus::done);
    CHECK(linkage_name(s.linkage) == "sim");
}

TEST_CASE("HTTP routes") {
    TempDir dir;
    SessionService svc(config_in(dir));
    LiveServer server(svc);
    auto cli = server.client();

    auto health = cli.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);

    auto created = cli.Post("/sessions", "", "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
    auto id = json::parse(created->body)["session_id"].get<std::string>();

    auto posted = cli.Post("/sessions/" + id + "/messages", json{{"text", one_shot}}.dump(), "application/json");
    REQUIRE(posted);
    CHECK(posted->status == 200);
    auto body = json::parse(posted->body);
    CHECK(body["linkage"]["state"] == "sim");
    CHECK(body["events"].size() == 8);
    CHECK(body["events"][0]["kind"] == "descent");
    auto run_id = body["events"].back()["run_id"].get<std::string>();

    auto run = cli.Get("/runs/" + run_id);
    REQUIRE(run);
    CHECK(run->status == 200);
    auto rj = json::parse(run->body);
    CHECK(rj["rh"].size() == 41);
    CHECK(rj["status"] == "done");

    auto csv = cli.Get("/runs/" + run_id + "/csv");
    REQUIRE(csv);
    CHECK(csv->status == 200);
    ldft::PorousMatrix m(3, 3, {1, 1, 1, 1, 0, 1, 1, 1, 1});
    CHECK(csv->body == io::isotherm_csv(ldft::compute_isotherm(m, {}, {})));

    auto hist = cli.Get("/sessions/" + id + "/history");
    REQUIRE(hist);
    auto hj = json::parse(hist->body);
    CHECK(hj["records"].size() == 10);
    CHECK(hj["records"][0]["role"] == "user");
    CHECK(hj["records"][9]["role"] == "system-note");
    CHECK(cli.Get("/sessions/" + id)->body == hist->body);

    auto reg = cli.Get("/registry");
    REQUIRE(reg);
    CHECK(json::parse(reg->body)["root"] == "root");

    CHECK(cli.Get("/sessions/s-424242/history")->status == 404);
    CHECK(cli.Get("/runs/r-424242")->status == 404);
    CHECK(cli.Post("/sessions/s-424242/messages", R"({"text":"hi"})", "application/json")->status == 404);
    CHECK(cli.Post("/sessions/" + id + "/messages", "not json", "application/json")->status == 400);
    CHECK(cli.Post("/sessions/" + id + "/messages", R"({"txt":"hi"})", "application/json")->status == 400);
    CHECK(cli.Post("/sessions/" + id + "/messages", R"({"text":"  "})", "application/json")->status == 400);
    CHECK(cli.Options("/sessions")->status == 204);
}

}
