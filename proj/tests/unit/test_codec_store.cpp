// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "../support/temp_dir.hpp"
#include "langsim/router/landscape.hpp"
#include "langsim/service/codec.hpp"
#include "langsim/service/store.hpp"

using namespace langsim;
using namespace langsim::service;
using nlohmann::json;
using testing_support::TempDir;

namespace {

constexpr const char* pore = "[[1,1,1],[1,0,1],[1,1,1]]";

struct Chat {
    backend::LexiconBackend backend;
    Dialogue dialogue{router::default_landscape()};
    Session session = new_session("s-000001", router::default_landscape().hierarchy);
    pipeline::ExecutionContext ctx;
    int runs = 0;
    std::optional<pipeline::RunOutput> output;

    Chat() { ctx.sweep.d_rh = 25.0; }
    void say(const std::string& text) {
        post_and_run(dialogue, session, text, backend, ctx, [this] { return "r-" + std::to_string(++runs); }, &output);
    }
};

void check_same(const Session& a, const Session& b) {
    CHECK(a.id == b.id);
    CHECK(a.log == b.log);
    CHECK(a.events == b.events);
    CHECK(linkage_json(a.linkage) == linkage_json(b.linkage));
    CHECK(a.note == b.note);
    CHECK(a.cleared_through == b.cleared_through);
    CHECK(a.runs == b.runs);
    CHECK(a.in_flight == b.in_flight);
}

}  // namespace

TEST_SUITE("codec_store") {

TEST_CASE("events and records round-trip") {
    Event e{EventKind::result, "2D-LDFT-isotherm", "done", "simulator:x", "r-1", true};
    CHECK(event_from_json(event_json(e)) == e);
    Event plain{EventKind::hint, "root", "pick", "LM-Type:root", std::nullopt, false};
    auto j = event_json(plain);
    CHECK_FALSE(j.contains("run_id"));
    CHECK(event_from_json(j) == plain);
    CHECK_THROWS(event_from_json(json{{"kind", "shout"}, {"label", ""}, {"text", ""}, {"agent", ""}}));

    memory::ChatRecord r{4, memory::Role::agent, "done", false, "simulator:x"};
    auto [back, ev] = record_from_json(record_json(r, &e));
    CHECK(back == r);
    REQUIRE(ev);
    CHECK(*ev == e);
    auto [user, none] = record_from_json(record_json({1, memory::Role::user, "hi", true, "LM-Type:root"}, nullptr));
    CHECK(user.filtered);
    CHECK_FALSE(none);
}

TEST_CASE("state round-trips through every linkage") {
    Chat c;
    std::vector<std::string> script{"hello", "mesoscale", "sorption LDFT", "2D", "isotherm", "300 K",
                                    pore, "hysteresis please", "oops [[2]]"};
    for (const auto& text : script) {
        c.say(text);
        Session back;
        back.id = c.session.id;
        apply_state_json(back, json::parse(state_json(c.session).dump()), router::default_landscape());
        back.log = c.session.log;
        back.events = c.session.events;
        check_same(back, c.session);
    }
    CHECK(linkage_name(c.session.linkage) == "sim");
}

TEST_CASE("linkages that do not fit the landscape are rejected") {
    auto j = linkage_json(AtSimFamily{"2D-LDFT"});
    CHECK(j["state"] == "sim");
    j["leaf"] = "4D-LDFT";
    CHECK_THROWS(linkage_from_json(j, router::default_landscape()));
    auto t = linkage_json(AtTypeNode{{"LDFT", {"root", "LDFT"}}});
    CHECK_THROWS(linkage_from_json(t, router::default_landscape()));
}

TEST_CASE("run records keep curves exactly") {
    Chat c;
    c.say(std::string("mesoscale sorption 2D LDFT hysteresis 300 K ") + pore);
    REQUIRE(c.output);
    const auto& reg = router::default_landscape().registry;
    RunJob job{"r-1", "s-000001", "2D-LDFT", pipeline::ExecutionSession("2D-LDFT-hysteresis", *reg.tool("ldft-2d")),
               *reg.find_variant("2D-LDFT-hysteresis")};
    RunOutcome outcome{"r-1", *c.output, "2026-01-01T00:00:00Z"};
    auto rec = finished_run(job, outcome);
    CHECK(rec.status == RunStatus::done);
    auto j = run_json(rec);
    CHECK(j["rh"].size() == 5);
    CHECK(j["density_des"].size() == 5);
    CHECK(j["density_des"].back() == j["density"].back());
    CHECK(j.contains("loop_area"));
    CHECK(run_from_json(json::parse(j.dump())) == rec);

    auto failed = finished_run(job, {"r-1", std::string("boom"), "t"});
    CHECK(failed.status == RunStatus::failed);
    CHECK(run_from_json(run_json(failed)) == failed);
    CHECK(run_from_json(run_json(pending_run(job))).status == RunStatus::pending);
}

TEST_CASE("history and registry documents") {
    Chat c;
    c.say("mesoscale sorption");
    auto h = history_json(c.session);
    CHECK(h["session_id"] == "s-000001");
    CHECK(h["busy"] == false);
    CHECK(h["records"].size() == c.session.log.size());
    CHECK(h["records"][1]["event"]["kind"] == "descent");
    auto reg = registry_json(router::default_landscape());
    CHECK(reg["root"] == "root");
    bool found = false;
    for (const auto& f : reg["families"]) {
        if (f["leaf"] == "2D-LDFT") found = f["variants"].size() == 2;
    }
    CHECK(found);
}

TEST_CASE("store reloads sessions and runs") {
    TempDir dir;
    Chat c;
    SessionStore store(dir.path());
    store.save(c.session, 0);
    std::size_t from = 0;
    for (const auto& text : {"mesoscale sorption", "2D LDFT", "isotherm at 300 K", pore}) {
        c.say(text);
        store.save(c.session, from);
        from = c.session.log.size();
    }
    auto loaded = store.load_sessions(router::default_landscape());
    REQUIRE(loaded.size() == 1);
    check_same(loaded[0], c.session);
    RunRecord r;
    r.run_id = "r-7";
    r.session_id = "s-000001";
    r.variant_id = "2D-LDFT-isotherm";
    store.save_run(r);
    CHECK(store.load_runs().at("r-7") == r);
}

TEST_CASE("torn and uncovered trailing lines are dropped") {
    TempDir dir;
    Chat c;
    SessionStore store(dir.path());
    c.say("mesoscale sorption");
    store.save(c.session, 0);
    auto records = dir / "sessions/s-000001/records.jsonl";
    auto intact = testing_support::slurp(records);

    testing_support::spit(records, intact + "{\"seq\": 99, \"ro");
    auto loaded = store.load_sessions(router::default_landscape());
    check_same(loaded.at(0), c.session);
    CHECK(testing_support::slurp(records) == intact);

    auto extra = c.session;
    c.say("LDFT");  // lines written, state not replaced
    std::string tail;
    for (std::size_t i = extra.log.size(); i < c.session.log.size(); ++i) {
        auto it = c.session.events.find(c.session.log[i].seq);
        tail += record_json(c.session.log[i], it == c.session.events.end() ? nullptr : &it->second).dump() + "\n";
    }
    testing_support::spit(records, intact + tail);
    loaded = store.load_sessions(router::default_landscape());
    check_same(loaded.at(0), extra);
    CHECK(testing_support::slurp(records) == intact);
}

TEST_CASE("a log shorter than the state is an error") {
    TempDir dir;
    Chat c;
    SessionStore store(dir.path());
    c.say("mesoscale sorption");
    store.save(c.session, 0);
    testing_support::spit(dir / "sessions/s-000001/records.jsonl", "");
    CHECK_THROWS_AS(store.load_sessions(router::default_landscape()), std::runtime_error);
}

}
