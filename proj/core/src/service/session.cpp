// SPDX-License-Identifier: Apache-2.0
#include "langsim/service/session.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <stdexcept>

#include "langsim/router/router.hpp"

namespace langsim::service {

using memory::AgentRole;
namespace ids = memory::agent_ids;

std::string_view linkage_name(const Linkage& l) {
    switch (l.index()) {
        case 0: return "type";
        case 1: return "sim";
        default: return "execution";
    }
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::hint: return "hint";
        case EventKind::descent: return "descent";
        case EventKind::variant: return "variant";
        case EventKind::slot: return "slot";
        case EventKind::result: return "result";
        case EventKind::error: return "error";
    }
    return "hint";
}

EventKind event_kind_from_string(std::string_view s) {
    for (auto k : {EventKind::hint, EventKind::descent, EventKind::variant, EventKind::slot,
                   EventKind::result, EventKind::error}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument(fmt::format("unknown event kind '{}'", s));
}

Session new_session(std::string id, const router::TypeHierarchy& h) {
    Session s;
    s.id = std::move(id);
    s.linkage = AtTypeNode{router::NavigationState::at_root(h)};
    return s;
}

std::string utc_now() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                    std::chrono::system_clock::now())));
}

Dialogue::Dialogue(const router::Landscape& landscape, std::size_t token_budget)
    : landscape_(landscape), token_budget_(token_budget) {}

memory::Window Dialogue::window(AgentRole role, const Session& s, bool hinted) const {
    memory::MemoryView view{s.note ? &*s.note : nullptr, s.cleared_through, hinted, token_budget_};
    auto w = memory::window_for(role, s.log, view);
    if (observer_) observer_(role, w);
    return w;
}

namespace {

std::string linked_agent(const Linkage& l) {
    if (const auto* t = std::get_if<AtTypeNode>(&l)) return fmt::format("{}{}", ids::type_prefix, t->nav.current);
    if (const auto* f = std::get_if<AtSimFamily>(&l)) return fmt::format("{}{}", ids::sim_prefix, f->leaf);
    const auto& exe = std::get<AtExecution>(l).exe;
    std::size_t slot = exe.cursor() < exe.slots().size() ? exe.cursor() : 0;
    return fmt::format("{}{}", ids::exe_prefix, exe.slots()[slot].spec.name);
}

void append_event(Session& s, Event e) {
    memory::ChatRecord r{s.last_seq() + 1, memory::Role::agent, e.text, false, e.agent_id};
    s.events.emplace(r.seq, std::move(e));
    s.log.push_back(std::move(r));
}

std::string result_text(const pipeline::RunOutput& out, const registry::SimulatorVariant& v) {
    if (const auto* c = std::get_if<ldft::IsothermCurve>(&out.payload)) {
        const auto& pts = c->points;
        return fmt::format("{} finished: {} over {} RH points ({}% to {}%).", v.id, v.output_label, pts.size(),
                           pts.front().rh, pts.back().rh);
    }
    const auto& loop = std::get<ldft::HysteresisLoop>(out.payload);
    const auto& pts = loop.adsorption.points;
    return fmt::format("{} finished: {} over {} RH points ({}% to {}%), loop area {:.6g}.", v.id, v.output_label,
                       pts.size(), pts.front().rh, pts.back().rh, loop.area());
}

}  // namespace

PostResult Dialogue::post(Session& s, std::string_view text, backend::DecisionBackend& backend,
                          const std::function<std::string()>& next_run_id) {
    if (s.in_flight) throw std::logic_error("session has a run in flight");
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw InvalidMessage("message text is empty");
    }
    std::size_t tokens = backend::estimate_tokens(text) + (s.note ? backend::estimate_tokens(s.note->render()) : 0);
    if (tokens > token_budget_) {
        throw InvalidMessage(
            fmt::format("message needs about {} tokens, above the budget of {}", tokens, token_budget_));
    }

    std::size_t user_index = s.log.size();
    s.log.push_back({s.last_seq() + 1, memory::Role::user, std::string(text), false, linked_agent(s.linkage)});

    PostResult out;
    bool progressed = false;
    bool filtered = false;

    if (auto* at = std::get_if<AtTypeNode>(&s.linkage)) {
        auto w = window(AgentRole::lm_type, s, false);
        auto adv = router::advance(landscape_.hierarchy, at->nav, memory::latest_text(w), backend);
        std::string parent = at->nav.current;
        for (const auto& id : adv.descended) {
            out.events.push_back({EventKind::descent, id, fmt::format("Simulation type: {}", id),
                                  fmt::format("{}{}", ids::type_prefix, parent), std::nullopt, false});
            parent = id;
        }
        progressed = !adv.descended.empty();
        if (adv.hint) {
            at->nav = adv.state;
            out.events.push_back({EventKind::hint, adv.state.current, *adv.hint,
                                  fmt::format("{}{}", ids::type_prefix, adv.state.current), std::nullopt, false});
            filtered = adv.filtered;
        } else {
            s.linkage = AtSimFamily{*adv.arrived};
        }
    }

    // Linkage only moves on progress, so a hint above stops the cascade here.
    if (auto* at = std::get_if<AtSimFamily>(&s.linkage)) {
        std::string leaf = at->leaf;
        const auto& family = landscape_.registry.family(landscape_.hierarchy.node(leaf).family);
        auto w = window(AgentRole::lm_sim, s, false);
        auto sel = registry::select_simulator(family, w, s.note ? &*s.note : nullptr, backend);
        std::string agent = fmt::format("{}{}", ids::sim_prefix, leaf);
        if (sel.selected) {
            const auto& v = *family.variant(*sel.selected);
            out.events.push_back({EventKind::variant, v.id, fmt::format("Simulator selected: {} ({}).", v.id, v.output_label),
                                  agent, std::nullopt, false});
            progressed = true;
            s.linkage = AtExecution{leaf, pipeline::ExecutionSession(v.id, landscape_.registry.tool_for(v))};
        } else {
            out.events.push_back({EventKind::hint, leaf, sel.hint, agent, std::nullopt, false});
            filtered = !progressed && sel.filtered;
        }
    }

    if (auto* at = std::get_if<AtExecution>(&s.linkage)) {
        auto& exe = at->exe;
        const memory::MemoryNote* note = s.note ? &*s.note : nullptr;
        auto action = exe.hinted() ? memory::Window{} : window(AgentRole::llm_action, s, false);
        auto pattern = window(AgentRole::lm_pattern, s, exe.hinted());
        for (const auto& ev : pipeline::step(exe, action, memory::latest_text(pattern), note, backend)) {
            if (ev.kind == pipeline::StepEvent::Kind::ready) continue;
            bool fill = ev.kind == pipeline::StepEvent::Kind::slot_filled;
            out.events.push_back({fill ? EventKind::slot : EventKind::hint, ev.parameter, ev.text,
                                  fmt::format("{}{}", ids::exe_prefix, ev.parameter), std::nullopt, false});
        }
        if (exe.phase() == pipeline::Phase::ready) {
            const auto* v = landscape_.registry.find_variant(exe.variant_id());
            if (!v) throw std::logic_error(fmt::format("variant '{}' missing from registry", exe.variant_id()));
            out.job = RunJob{next_run_id(), s.id, at->leaf, exe, *v};
        }
    }

    s.log[user_index].filtered = filtered;
    for (const auto& e : out.events) append_event(s, e);
    if (out.job) s.in_flight = out.job->run_id;
    return out;
}

Event Dialogue::mark_pending(Session& s, const RunJob& job) {
    Event e{EventKind::result, job.variant.id, fmt::format("{} is running as {}.", job.variant.id, job.run_id),
            fmt::format("{}{}", ids::simulator_prefix, job.variant.id), job.run_id, true};
    append_event(s, e);
    return e;
}

std::vector<Event> Dialogue::complete(Session& s, const RunJob& job, const RunOutcome& outcome) {
    if (s.in_flight != job.run_id) throw std::logic_error("completed run is not the session's run in flight");
    auto* at = std::get_if<AtExecution>(&s.linkage);
    if (!at) throw std::logic_error("run completed outside execution linkage");

    std::string agent = fmt::format("{}{}", ids::simulator_prefix, job.variant.id);
    std::vector<Event> events;
    s.in_flight.reset();
    s.runs.push_back(job.run_id);

    if (const auto* failure = std::get_if<std::string>(&outcome.result)) {
        at->exe.mark_failed(*failure);
        events.push_back({EventKind::error, job.variant.id,
                          fmt::format("Simulation failed: {}. Send an amended input to retry.", *failure), agent,
                          job.run_id, false});
        append_event(s, events.back());
        return events;
    }

    const auto& output = std::get<pipeline::RunOutput>(outcome.result);
    events.push_back({EventKind::result, job.variant.id, result_text(output, job.variant), agent, job.run_id, false});
    append_event(s, events.back());

    s.note = memory::summarize_completed(job.variant.id, output.inputs, outcome.completed_at);
    s.cleared_through = s.last_seq();
    s.log.push_back({s.last_seq() + 1, memory::Role::system_note, s.note->render(), false, agent});
    s.linkage = AtSimFamily{job.leaf};
    return events;
}

RunOutcome run_job(const RunJob& job, const pipeline::ExecutionContext& ctx) {
    RunOutcome outcome{job.run_id, std::string{}, {}};
    auto exe = job.exe;
    try {
        outcome.result = pipeline::execute(exe, job.variant, ctx);
    } catch (const std::exception& e) {
        outcome.result = std::string(e.what());
    }
    outcome.completed_at = utc_now();
    return outcome;
}

std::vector<Event> post_and_run(Dialogue& d, Session& s, std::string_view text, backend::DecisionBackend& backend,
                                const pipeline::ExecutionContext& ctx,
                                const std::function<std::string()>& next_run_id,
                                std::optional<pipeline::RunOutput>* output) {
    auto posted = d.post(s, text, backend, next_run_id);
    if (!posted.job) return posted.events;
    auto outcome = run_job(*posted.job, ctx);
    auto tail = d.complete(s, *posted.job, outcome);
    posted.events.insert(posted.events.end(), tail.begin(), tail.end());
    if (output) {
        if (auto* o = std::get_if<pipeline::RunOutput>(&outcome.result)) *output = std::move(*o);
    }
    return posted.events;
}

}  // namespace langsim::service
