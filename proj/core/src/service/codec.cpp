// SPDX-License-Identifier: Apache-2.0
#include "langsim/service/codec.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "langsim/pipeline/patterns.hpp"

namespace langsim::service {

using nlohmann::json;

std::string_view to_string(RunStatus s) {
    switch (s) {
        case RunStatus::pending: return "pending";
        case RunStatus::done: return "done";
        case RunStatus::failed: return "failed";
    }
    return "pending";
}

RunStatus run_status_from_string(std::string_view s) {
    if (s == "pending") return RunStatus::pending;
    if (s == "done") return RunStatus::done;
    if (s == "failed") return RunStatus::failed;
    throw std::invalid_argument(fmt::format("unknown run status '{}'", s));
}

RunRecord pending_run(const RunJob& job) {
    RunRecord r;
    r.run_id = job.run_id;
    r.session_id = job.session_id;
    r.variant_id = job.variant.id;
    r.output = job.variant.output;
    r.inputs = job.exe.serialized_inputs();
    return r;
}

RunRecord finished_run(const RunJob& job, const RunOutcome& outcome) {
    RunRecord r = pending_run(job);
    if (const auto* out = std::get_if<pipeline::RunOutput>(&outcome.result)) {
        r.status = RunStatus::done;
        r.wall_seconds = out->wall_seconds;
        r.payload = out->payload;
    } else {
        r.status = RunStatus::failed;
        r.error = std::get<std::string>(outcome.result);
    }
    return r;
}

namespace {

json pairs_json(const std::vector<std::pair<std::string, std::string>>& pairs) {
    json arr = json::array();
    for (const auto& [k, v] : pairs) arr.push_back({{"name", k}, {"value", v}});
    return arr;
}

std::vector<std::pair<std::string, std::string>> pairs_from_json(const json& j) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : j) out.emplace_back(e.at("name").get<std::string>(), e.at("value").get<std::string>());
    return out;
}

pipeline::SlotSource source_from_string(std::string_view s) {
    if (s == "user-text") return pipeline::SlotSource::user_text;
    if (s == "memory-note") return pipeline::SlotSource::memory_note;
    throw std::invalid_argument(fmt::format("unknown slot source '{}'", s));
}

pipeline::Phase phase_from_string(std::string_view s) {
    for (auto p : {pipeline::Phase::collecting, pipeline::Phase::ready, pipeline::Phase::done}) {
        if (pipeline::to_string(p) == s) return p;
    }
    throw std::invalid_argument(fmt::format("unknown execution phase '{}'", s));
}

}  // namespace

json event_json(const Event& e) {
    json j{{"kind", to_string(e.kind)}, {"label", e.label}, {"text", e.text}, {"agent", e.agent_id}};
    if (e.run_id) j["run_id"] = *e.run_id;
    if (e.pending) j["pending"] = true;
    return j;
}

Event event_from_json(const json& j) {
    Event e;
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.label = j.at("label").get<std::string>();
    e.text = j.at("text").get<std::string>();
    e.agent_id = j.at("agent").get<std::string>();
    if (j.contains("run_id")) e.run_id = j.at("run_id").get<std::string>();
    e.pending = j.value("pending", false);
    return e;
}

json record_json(const memory::ChatRecord& r, const Event* e) {
    json j{{"seq", r.seq},
           {"role", memory::to_string(r.role)},
           {"text", r.text},
           {"filtered", r.filtered},
           {"agent_id", r.agent_id}};
    if (e) j["event"] = event_json(*e);
    return j;
}

std::pair<memory::ChatRecord, std::optional<Event>> record_from_json(const json& j) {
    memory::ChatRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    r.role = memory::role_from_string(j.at("role").get<std::string>());
    r.text = j.at("text").get<std::string>();
    r.filtered = j.at("filtered").get<bool>();
    r.agent_id = j.at("agent_id").get<std::string>();
    std::optional<Event> e;
    if (j.contains("event")) e = event_from_json(j.at("event"));
    return {std::move(r), std::move(e)};
}

json note_json(const memory::MemoryNote& n) {
    return {{"variant_id", n.variant_id}, {"inputs", pairs_json(n.inputs)}, {"completed_at", n.completed_at},
            {"rendered", n.render()}};
}

memory::MemoryNote note_from_json(const json& j) {
    return memory::summarize_completed(j.at("variant_id").get<std::string>(), pairs_from_json(j.at("inputs")),
                                       j.at("completed_at").get<std::string>());
}

json linkage_json(const Linkage& l) {
    if (const auto* t = std::get_if<AtTypeNode>(&l)) {
        return {{"state", "type"}, {"node", t->nav.current}, {"path", t->nav.path}};
    }
    if (const auto* f = std::get_if<AtSimFamily>(&l)) return {{"state", "sim"}, {"leaf", f->leaf}};
    const auto& at = std::get<AtExecution>(l);
    json slots = json::array();
    for (const auto& s : at.exe.slots()) {
        json slot{{"name", s.spec.name}, {"value", nullptr}, {"source", pipeline::to_string(s.source)}};
        if (s.value) slot["value"] = pipeline::serialize_value(*s.value);
        slots.push_back(std::move(slot));
    }
    json j{{"state", "execution"},
           {"leaf", at.leaf},
           {"variant", at.exe.variant_id()},
           {"phase", pipeline::to_string(at.exe.phase())},
           {"cursor", at.exe.cursor()},
           {"hinted", at.exe.hinted()},
           {"failure", nullptr},
           {"slots", std::move(slots)}};
    if (at.exe.failure()) j["failure"] = *at.exe.failure();
    return j;
}

Linkage linkage_from_json(const json& j, const router::Landscape& landscape) {
    auto state = j.at("state").get<std::string>();
    const auto& h = landscape.hierarchy;
    if (state == "type") {
        router::NavigationState nav{j.at("node").get<std::string>(),
                                    j.at("path").get<std::vector<std::string>>()};
        if (!nav.valid_in(h)) throw std::invalid_argument(fmt::format("stale type linkage '{}'", nav.current));
        return AtTypeNode{std::move(nav)};
    }
    auto leaf = j.at("leaf").get<std::string>();
    if (!h.contains(leaf) || !h.node(leaf).leaf()) {
        throw std::invalid_argument(fmt::format("linkage names unknown leaf '{}'", leaf));
    }
    if (state == "sim") return AtSimFamily{leaf};
    if (state != "execution") throw std::invalid_argument(fmt::format("unknown linkage state '{}'", state));

    auto variant_id = j.at("variant").get<std::string>();
    const auto* v = landscape.registry.find_variant(variant_id);
    if (!v) throw std::invalid_argument(fmt::format("linkage names unknown variant '{}'", variant_id));
    const auto& tool = landscape.registry.tool_for(*v);
    const auto& stored = j.at("slots");
    if (stored.size() != tool.parameters.size()) {
        throw std::invalid_argument(fmt::format("variant '{}' expects {} slots, state has {}", variant_id,
                                                tool.parameters.size(), stored.size()));
    }
    std::vector<pipeline::InputSlot> slots;
    for (std::size_t i = 0; i < stored.size(); ++i) {
        const auto& spec = tool.parameters[i];
        const auto& sj = stored[i];
        if (sj.at("name").get<std::string>() != spec.name) {
            throw std::invalid_argument(fmt::format("slot {} should be '{}'", i, spec.name));
        }
        pipeline::InputSlot slot{spec, std::nullopt, source_from_string(sj.at("source").get<std::string>())};
        if (!sj.at("value").is_null()) {
            auto check = pipeline::parse_serialized(spec, sj.at("value").get<std::string>());
            if (check.status != pipeline::ValueCheck::Status::valid) {
                throw std::invalid_argument(fmt::format("stored value of '{}' is not valid", spec.name));
            }
            slot.value = std::move(check.value);
        }
        slots.push_back(std::move(slot));
    }
    std::optional<std::string> failure;
    if (!j.at("failure").is_null()) failure = j.at("failure").get<std::string>();
    return AtExecution{leaf, pipeline::ExecutionSession::restore(variant_id, std::move(slots),
                                                                 phase_from_string(j.at("phase").get<std::string>()),
                                                                 j.at("hinted").get<bool>(), std::move(failure))};
}

json state_json(const Session& s) {
    json j{{"session_id", s.id},
           {"last_seq", s.last_seq()},
           {"linkage", linkage_json(s.linkage)},
           {"note", nullptr},
           {"cleared_through", s.cleared_through},
           {"runs", s.runs},
           {"in_flight", nullptr}};
    if (s.note) j["note"] = note_json(*s.note);
    if (s.in_flight) j["in_flight"] = *s.in_flight;
    return j;
}

void apply_state_json(Session& s, const json& j, const router::Landscape& landscape) {
    s.id = j.at("session_id").get<std::string>();
    s.linkage = linkage_from_json(j.at("linkage"), landscape);
    s.note.reset();
    if (!j.at("note").is_null()) s.note = note_from_json(j.at("note"));
    s.cleared_through = j.at("cleared_through").get<std::uint64_t>();
    s.runs = j.at("runs").get<std::vector<std::string>>();
    s.in_flight.reset();
    if (!j.at("in_flight").is_null()) s.in_flight = j.at("in_flight").get<std::string>();
}

json run_json(const RunRecord& r) {
    json j{{"run_id", r.run_id},
           {"session_id", r.session_id},
           {"variant_id", r.variant_id},
           {"output", registry::to_string(r.output)},
           {"status", to_string(r.status)},
           {"inputs", pairs_json(r.inputs)},
           {"wall_seconds", r.wall_seconds}};
    if (!r.error.empty()) j["error"] = r.error;
    if (!r.payload) return j;
    json rh = json::array(), density = json::array();
    if (const auto* c = std::get_if<ldft::IsothermCurve>(&*r.payload)) {
        for (const auto& p : c->points) {
            rh.push_back(p.rh);
            density.push_back(p.mean_density);
        }
        j["rh"] = std::move(rh);
        j["density"] = std::move(density);
        return j;
    }
    const auto& loop = std::get<ldft::HysteresisLoop>(*r.payload);
    json des = json::array();
    for (std::size_t i = 0; i < loop.adsorption.points.size(); ++i) {
        rh.push_back(loop.adsorption.points[i].rh);
        density.push_back(loop.adsorption.points[i].mean_density);
        des.push_back(loop.desorption_at(i));
    }
    j["rh"] = std::move(rh);
    j["density"] = std::move(density);
    j["density_des"] = std::move(des);
    j["loop_area"] = loop.area();
    return j;
}

RunRecord run_from_json(const json& j) {
    RunRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    r.session_id = j.at("session_id").get<std::string>();
    r.variant_id = j.at("variant_id").get<std::string>();
    r.output = registry::output_kind_from_string(j.at("output").get<std::string>());
    r.status = run_status_from_string(j.at("status").get<std::string>());
    r.inputs = pairs_from_json(j.at("inputs"));
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.error = j.value("error", std::string{});
    if (!j.contains("rh")) return r;
    auto rh = j.at("rh").get<std::vector<double>>();
    auto density = j.at("density").get<std::vector<double>>();
    if (rh.size() != density.size() || rh.empty()) throw std::invalid_argument("run arrays differ in length");
    if (r.output == registry::OutputKind::isotherm) {
        ldft::IsothermCurve c;
        for (std::size_t i = 0; i < rh.size(); ++i) c.points.push_back({rh[i], density[i]});
        r.payload = std::move(c);
        return r;
    }
    auto des = j.at("density_des").get<std::vector<double>>();
    if (des.size() != rh.size()) throw std::invalid_argument("run arrays differ in length");
    ldft::HysteresisLoop loop;
    loop.desorption.branch = ldft::Branch::descending;
    for (std::size_t i = 0; i < rh.size(); ++i) loop.adsorption.points.push_back({rh[i], density[i]});
    for (std::size_t i = rh.size(); i-- > 0;) loop.desorption.points.push_back({rh[i], des[i]});
    r.payload = std::move(loop);
    return r;
}

json history_json(const Session& s) {
    json records = json::array();
    for (const auto& r : s.log) {
        auto it = s.events.find(r.seq);
        records.push_back(record_json(r, it == s.events.end() ? nullptr : &it->second));
    }
    return {{"session_id", s.id},
            {"linkage", linkage_json(s.linkage)},
            {"busy", s.in_flight.has_value()},
            {"records", std::move(records)}};
}

json registry_json(const router::Landscape& landscape) {
    json nodes = json::array();
    for (const auto& [id, n] : landscape.hierarchy.nodes()) {
        json node{{"id", id}, {"level", router::to_string(n.level)}, {"children", n.children}};
        node["parent"] = n.parent ? json(*n.parent) : json(nullptr);
        if (n.leaf()) node["family"] = n.family;
        nodes.push_back(std::move(node));
    }
    json families = json::array();
    for (const auto& [key, f] : landscape.registry.families()) {
        json variants = json::array();
        for (const auto& v : f.variants) {
            json params = json::array();
            for (const auto& p : landscape.registry.tool_for(v).parameters) {
                params.push_back({{"name", p.name},
                                  {"format", registry::to_string(p.format)},
                                  {"units", p.units},
                                  {"bounds", p.bounds.to_string()}});
            }
            variants.push_back({{"id", v.id},
                                {"tool", v.tool_id},
                                {"output", registry::to_string(v.output)},
                                {"label", v.output_label},
                                {"parameters", std::move(params)}});
        }
        families.push_back({{"leaf", key}, {"variants", std::move(variants)}});
    }
    return {{"root", landscape.hierarchy.root()}, {"nodes", std::move(nodes)}, {"families", std::move(families)}};
}

}  // namespace langsim::service
