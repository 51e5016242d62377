// SPDX-License-Identifier: Apache-2.0
#include "langsim/memory/chat_memory.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace langsim::memory {

std::string_view to_string(Role r) {
    switch (r) {
        case Role::user: return "user";
        case Role::agent: return "agent";
        case Role::system_note: return "system-note";
    }
    return "user";
}

Role role_from_string(std::string_view s) {
    if (s == "user") return Role::user;
    if (s == "agent") return Role::agent;
    if (s == "system-note") return Role::system_note;
    throw std::invalid_argument(fmt::format("unknown chat role '{}'", s));
}

std::string_view to_string(AgentRole r) {
    switch (r) {
        case AgentRole::lm_type: return "LM-Type";
        case AgentRole::lm_sim: return "LM-Sim";
        case AgentRole::llm_action: return "LLM-Action";
        case AgentRole::lm_pattern: return "LM-Pattern";
    }
    return "LM-Type";
}

const std::string* MemoryNote::input(std::string_view name) const {
    for (const auto& [k, v] : inputs) {
        if (k == name) return &v;
    }
    return nullptr;
}

std::string MemoryNote::render() const {
    std::string out = fmt::format("[memory-note] simulator={}", variant_id);
    for (const auto& [k, v] : inputs) out += fmt::format("; {}={}", k, v);
    return out;
}

MemoryNote summarize_completed(std::string variant_id,
                               std::vector<std::pair<std::string, std::string>> inputs,
                               std::string completed_at) {
    return MemoryNote{std::move(variant_id), std::move(inputs), std::move(completed_at)};
}

MemoryPolicy MemoryPolicy::standard() {
    return MemoryPolicy{{
        {AgentRole::lm_type, WindowRule::latest_only},
        {AgentRole::lm_sim, WindowRule::inherited_then_latest},
        {AgentRole::llm_action, WindowRule::note_plus_latest},
        {AgentRole::lm_pattern, WindowRule::latest_after_hint},
    }};
}

void MemoryPolicy::validate() const {
    for (auto r : {AgentRole::lm_type, AgentRole::lm_sim, AgentRole::llm_action,
                   AgentRole::lm_pattern}) {
        if (!rules.contains(r)) {
            throw std::invalid_argument(fmt::format("memory policy has no rule for {}", to_string(r)));
        }
    }
}

std::vector<std::string> texts(const Window& w) {
    std::vector<std::string> out;
    out.reserve(w.size());
    for (const auto& e : w) out.push_back(e.text);
    return out;
}

std::string_view latest_text(const Window& w) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (!it->is_note) return it->text;
    }
    return {};
}

std::size_t window_tokens(const Window& w) {
    std::size_t total = 0;
    for (const auto& e : w) total += backend::estimate_tokens(e.text);
    return total;
}

namespace {

bool visible(const ChatRecord& r, const MemoryView& view) { return r.seq > view.cleared_through; }

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

const ChatRecord* latest_user(std::span<const ChatRecord> log, const MemoryView& view) {
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        if (!visible(*it, view)) break;
        if (it->role == Role::user && !it->filtered) return &*it;
    }
    return nullptr;
}

/// LM-Sim has already produced output since the last clear.
bool sim_already_active(std::span<const ChatRecord> log, const MemoryView& view) {
    for (const auto& r : log) {
        if (visible(r, view) && r.role == Role::agent &&
            starts_with(r.agent_id, agent_ids::sim_prefix)) {
            return true;
        }
    }
    return false;
}

Window latest_only(std::span<const ChatRecord> log, const MemoryView& view) {
    const ChatRecord* latest = latest_user(log, view);
    if (!latest) return {};
    return {{latest->seq, latest->text, false}};
}

/// Every visible unfiltered user text, oldest dropped first to fit the budget.
Window inherited(std::span<const ChatRecord> log, const MemoryView& view) {
    Window w;
    for (const auto& r : log) {
        if (visible(r, view) && r.role == Role::user && !r.filtered) {
            w.push_back({r.seq, r.text, false});
        }
    }
    while (w.size() > 1 && window_tokens(w) > view.token_budget) w.erase(w.begin());
    return w;
}

Window sim_window(std::span<const ChatRecord> log, const MemoryView& view) {
    if (view.note) {
        Window w{{0, view.note->render(), true}};
        if (const ChatRecord* latest = latest_user(log, view)) {
            w.push_back({latest->seq, latest->text, false});
        }
        return w;
    }
    if (!sim_already_active(log, view)) return inherited(log, view);
    return latest_only(log, view);
}

}  // namespace

Window window_for(AgentRole role, std::span<const ChatRecord> log, const MemoryView& view,
                  const MemoryPolicy& policy) {
    switch (policy.rule_for(role)) {
        case WindowRule::latest_only:
            return latest_only(log, view);
        case WindowRule::inherited_then_latest:
        case WindowRule::note_plus_latest:
            return sim_window(log, view);
        case WindowRule::latest_after_hint:
            return view.input_hinted ? latest_only(log, view) : sim_window(log, view);
    }
    return {};
}

}  // namespace langsim::memory
