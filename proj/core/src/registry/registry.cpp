// SPDX-License-Identifier: Apache-2.0
#include "langsim/registry/registry.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include "langsim/router/landscape.hpp"

namespace langsim::registry {

std::string_view to_string(ParamFormat f) { return f == ParamFormat::number ? "number" : "matrix"; }

std::string_view to_string(OutputKind k) {
    return k == OutputKind::isotherm ? "isotherm" : "hysteresis-loop";
}

OutputKind output_kind_from_string(std::string_view s) {
    if (s == "isotherm") return OutputKind::isotherm;
    if (s == "hysteresis-loop") return OutputKind::hysteresis_loop;
    throw std::invalid_argument(fmt::format("output kind '{}' is not isotherm or hysteresis-loop", s));
}

bool Interval::contains(double v) const {
    if (std::isnan(v)) return false;
    bool above = lo_open ? v > lo : v >= lo;
    bool below = hi_open ? v < hi : v <= hi;
    return above && below;
}

std::string Interval::to_string() const {
    return fmt::format("{}{}, {}{}", lo_open ? '(' : '[', lo, hi, hi_open ? ')' : ']');
}

Interval Interval::parse(std::string_view s) {
    auto bad = [&] { return std::invalid_argument(fmt::format("bad interval '{}'", s)); };
    if (s.size() < 5) throw bad();
    Interval iv;
    if (s.front() == '(') {
        iv.lo_open = true;
    } else if (s.front() != '[') {
        throw bad();
    }
    if (s.back() == ')') {
        iv.hi_open = true;
    } else if (s.back() != ']') {
        throw bad();
    }
    auto body = s.substr(1, s.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string_view::npos) throw bad();
    auto parse = [&](std::string_view t, double& out) {
        while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
        while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
        if (ec != std::errc{} || p != t.data() + t.size()) throw bad();
    };
    parse(body.substr(0, comma), iv.lo);
    parse(body.substr(comma + 1), iv.hi);
    if (!(iv.lo <= iv.hi)) throw bad();
    return iv;
}

const ParameterSpec* ToolFunction::parameter(std::string_view name) const {
    for (const auto& p : parameters) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

const SimulatorVariant* SimulatorFamily::variant(std::string_view id) const {
    for (const auto& v : variants) {
        if (v.id == id) return &v;
    }
    return nullptr;
}

std::vector<std::string> SimulatorFamily::variant_ids() const {
    std::vector<std::string> out;
    for (const auto& v : variants) out.push_back(v.id);
    return out;
}

void SimulatorRegistry::add_tool(ToolFunction tool) {
    auto id = tool.id;
    tools_[id] = std::move(tool);
}

void SimulatorRegistry::add_family(SimulatorFamily family) {
    auto key = family.leaf_id;
    families_[key] = std::move(family);
}

const ToolFunction* SimulatorRegistry::tool(std::string_view id) const {
    auto it = tools_.find(id);
    return it == tools_.end() ? nullptr : &it->second;
}

const SimulatorFamily& SimulatorRegistry::family(std::string_view leaf_id) const {
    auto it = families_.find(leaf_id);
    if (it == families_.end()) {
        static const SimulatorFamily empty{};
        return empty;
    }
    return it->second;
}

bool SimulatorRegistry::has_family(std::string_view leaf_id) const {
    return families_.find(leaf_id) != families_.end();
}

const SimulatorVariant* SimulatorRegistry::find_variant(std::string_view variant_id) const {
    for (const auto& [key, f] : families_) {
        if (const auto* v = f.variant(variant_id)) return v;
    }
    return nullptr;
}

const ToolFunction& SimulatorRegistry::tool_for(const SimulatorVariant& v) const {
    const ToolFunction* t = tool(v.tool_id);
    if (!t) throw std::out_of_range(fmt::format("variant '{}' names unknown tool '{}'", v.id, v.tool_id));
    return *t;
}

void SimulatorRegistry::validate() const {
    for (const auto& [id, t] : tools_) {
        if (t.parameters.empty()) {
            throw std::invalid_argument(fmt::format("tool '{}' has no parameters", id));
        }
        std::set<std::string> names;
        for (const auto& p : t.parameters) {
            if (!names.insert(p.name).second) {
                throw std::invalid_argument(fmt::format("tool '{}' repeats parameter '{}'", id, p.name));
            }
        }
    }
    std::set<std::string> variant_ids;
    for (const auto& [key, f] : families_) {
        const ToolFunction* shared = nullptr;
        for (const auto& v : f.variants) {
            if (!variant_ids.insert(v.id).second) {
                throw std::invalid_argument(fmt::format("variant id '{}' is not unique", v.id));
            }
            const ToolFunction* t = tool(v.tool_id);
            if (!t) {
                throw std::invalid_argument(
                    fmt::format("variant '{}' names unknown tool '{}'", v.id, v.tool_id));
            }
            if (shared && shared->parameters != t->parameters) {
                throw std::invalid_argument(fmt::format(
                    "family '{}' mixes tool functions: '{}' and '{}' have different parameters", key,
                    shared->id, t->id));
            }
            shared = t;
        }
    }
}

std::string availability_hint(const SimulatorFamily& family) {
    if (family.variants.empty()) {
        return fmt::format(
            "No simulators are available for {} yet. Start a new session to choose another "
            "simulation type.",
            family.leaf_id.empty() ? std::string("this simulation type") : family.leaf_id);
    }
    std::vector<std::string> items;
    for (const auto& v : family.variants) items.push_back(fmt::format("{} ({})", v.id, v.output_label));
    return fmt::format("Available {} simulators: {}. Which quantity should be computed?",
                       family.leaf_id, fmt::join(items, "; "));
}

SelectionResult select_simulator(const SimulatorFamily& family, const memory::Window& window,
                                 const memory::MemoryNote* note, backend::DecisionBackend& backend,
                                 double threshold) {
    if (family.variants.empty()) return {std::nullopt, availability_hint(family), true};

    backend::Lexicon lex;
    lex.confidence_threshold = threshold;
    for (const auto& v : family.variants) lex.entries[v.id] = v.phrases;
    if (note && family.variant(note->variant_id)) {
        auto& entry = lex.entries[note->variant_id];
        entry.insert(entry.end(), family.repeat_phrases.begin(), family.repeat_phrases.end());
    }

    backend::DecisionRequest req{backend::AgentKind::sim, family.variant_ids(),
                                 memory::texts(window), std::nullopt};
    // Deterministic scoring only reads the newest entry; a trailing note
    // must never stand in for user text.
    if (!req.context.empty() && !window.empty() && window.back().is_note) req.context.emplace_back();

    auto decision = backend.decide(req, lex);
    if (decision.selected()) return {decision.label(), {}, false};
    return {std::nullopt, availability_hint(family), decision.score == 0.0};
}

std::vector<SimulatorFamily> builtin_families() {
    std::vector<SimulatorFamily> out;
    for (const auto& [key, f] : router::default_landscape().registry.families()) out.push_back(f);
    return out;
}

}  // namespace langsim::registry
