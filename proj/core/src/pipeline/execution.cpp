// SPDX-License-Identifier: Apache-2.0
#include "langsim/pipeline/execution.hpp"

#include <fmt/format.h>

#include <chrono>
#include <stdexcept>

#include "langsim/pipeline/patterns.hpp"

namespace langsim::pipeline {

std::string_view to_string(SlotSource s) {
    return s == SlotSource::user_text ? "user-text" : "memory-note";
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::collecting: return "collecting";
        case Phase::ready: return "ready";
        case Phase::done: return "done";
    }
    return "collecting";
}

std::string serialize_value(const SlotValue& v) {
    if (const double* d = std::get_if<double>(&v)) return format_number(*d);
    return serialize_matrix(std::get<ldft::PorousMatrix>(v));
}

ExecutionSession::ExecutionSession(std::string variant_id, const registry::ToolFunction& tool)
    : variant_id_(std::move(variant_id)) {
    if (tool.parameters.empty()) throw std::invalid_argument("tool function has no parameters");
    for (const auto& p : tool.parameters) slots_.push_back(InputSlot{p, std::nullopt, SlotSource::user_text});
}

const InputSlot* ExecutionSession::slot(std::string_view name) const {
    for (const auto& s : slots_) {
        if (s.spec.name == name) return &s;
    }
    return nullptr;
}

void ExecutionSession::fill(const SlotValue& value, SlotSource source) {
    if (phase_ != Phase::collecting || cursor_ >= slots_.size()) {
        throw std::logic_error("no empty slot to fill");
    }
    slots_[cursor_].value = value;
    slots_[cursor_].source = source;
    ++cursor_;
}

void ExecutionSession::replace(std::size_t index, const SlotValue& value) {
    if (!failure_) throw std::logic_error("filled slots are only replaced after a failed run");
    slots_.at(index).value = value;
    slots_.at(index).source = SlotSource::user_text;
}

void ExecutionSession::mark_ready() {
    if (cursor_ != slots_.size()) throw std::logic_error("session is not fully filled");
    phase_ = Phase::ready;
    failure_.reset();
}

void ExecutionSession::mark_done() {
    if (phase_ != Phase::ready) throw std::logic_error("only a ready session can complete");
    phase_ = Phase::done;
}

void ExecutionSession::mark_failed(std::string reason) {
    if (phase_ != Phase::ready) throw std::logic_error("only a ready session can fail");
    phase_ = Phase::collecting;
    hinted_ = true;
    failure_ = std::move(reason);
}

std::vector<std::pair<std::string, std::string>> ExecutionSession::serialized_inputs() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : slots_) {
        if (s.value) out.emplace_back(s.spec.name, serialize_value(*s.value));
    }
    return out;
}

ExecutionSession ExecutionSession::restore(std::string variant_id, std::vector<InputSlot> slots,
                                           Phase phase, bool hinted,
                                           std::optional<std::string> failure) {
    ExecutionSession es;
    es.variant_id_ = std::move(variant_id);
    es.slots_ = std::move(slots);
    es.phase_ = phase;
    es.hinted_ = hinted;
    es.failure_ = std::move(failure);
    es.cursor_ = 0;
    while (es.cursor_ < es.slots_.size() && es.slots_[es.cursor_].filled()) ++es.cursor_;
    es.check_invariants();
    return es;
}

void ExecutionSession::check_invariants() const {
    if (slots_.empty()) throw std::invalid_argument("execution session has no slots");
    for (std::size_t i = cursor_; i < slots_.size(); ++i) {
        if (slots_[i].filled()) throw std::invalid_argument("slots must be filled front to back");
    }
    bool full = cursor_ == slots_.size();
    if (phase_ != Phase::collecting && !full) {
        throw std::invalid_argument("ready/done session with empty slots");
    }
    if (failure_ && !(phase_ == Phase::collecting && full)) {
        throw std::invalid_argument("failed session must be collecting with all slots filled");
    }
    if (phase_ == Phase::collecting && full && !failure_) {
        throw std::invalid_argument("fully filled session must be ready");
    }
}

ValueCheck validate_value(const registry::ParameterSpec& spec, SlotValue value) {
    if (spec.format == registry::ParamFormat::number) {
        double v = std::get<double>(value);
        if (!spec.bounds.contains(v)) {
            return {ValueCheck::Status::invalid, std::nullopt,
                    fmt::format("{} must lie in {}{}, got {}", spec.name, spec.bounds.to_string(),
                                spec.units.empty() ? "" : " " + spec.units, format_number(v))};
        }
        return {ValueCheck::Status::valid, std::move(value), {}};
    }
    const auto& m = std::get<ldft::PorousMatrix>(value);
    for (double e : m.cells()) {
        if (!spec.bounds.contains(e)) {
            return {ValueCheck::Status::invalid, std::nullopt,
                    fmt::format("matrix entries must lie in {}", spec.bounds.to_string())};
        }
    }
    if (!m.simulatable()) return {ValueCheck::Status::invalid, std::nullopt, "no pore sites"};
    return {ValueCheck::Status::valid, std::move(value), {}};
}

namespace {

std::string malformed_reason(const Malformed& m) {
    if (m.reason == "ragged") return "matrix rows have different lengths";
    if (m.reason == "range") return "matrix entries must lie in [0, 1]";
    if (m.reason == "size") {
        return fmt::format("matrix exceeds {}x{}", max_matrix_side, max_matrix_side);
    }
    return "matrix brackets could not be parsed";
}

bool pattern_hit(const registry::ParameterSpec& spec, std::string_view text) {
    if (spec.format == registry::ParamFormat::number) {
        return extract_number(mask_matrix_spans(text)).has_value();
    }
    return !std::holds_alternative<NoMatch>(extract_matrix(text));
}

}  // namespace

ValueCheck check_value(const registry::ParameterSpec& spec, std::string_view text) {
    if (spec.format == registry::ParamFormat::number) {
        auto v = extract_number(mask_matrix_spans(text));
        if (!v) return {};
        return validate_value(spec, *v);
    }
    auto m = extract_matrix(text);
    if (std::holds_alternative<NoMatch>(m)) return {};
    if (const auto* bad = std::get_if<Malformed>(&m)) {
        return {ValueCheck::Status::invalid, std::nullopt, malformed_reason(*bad)};
    }
    return validate_value(spec, std::get<ldft::PorousMatrix>(std::move(m)));
}

ValueCheck parse_serialized(const registry::ParameterSpec& spec, std::string_view text) {
    return check_value(spec, text);
}

InputState decide_state(const InputSlot& slot, const memory::Window& window,
                        const memory::MemoryNote* note, backend::DecisionBackend& backend) {
    if (backend.pattern_input_state()) {
        for (auto it = window.rbegin(); it != window.rend(); ++it) {
            if (!it->is_note && pattern_hit(slot.spec, it->text)) return InputState::known;
        }
        if (note && note->input(slot.spec.name)) return InputState::known;
        return InputState::unknown;
    }
    backend::DecisionRequest req{backend::AgentKind::input_state,
                                 {std::string(backend::known_label), std::string(backend::unknown_label)},
                                 memory::texts(window),
                                 slot.spec.name};
    auto d = backend.decide(req, {});
    return d.selected() && d.label() == backend::known_label ? InputState::known : InputState::unknown;
}

std::string input_hint(const registry::ParameterSpec& spec, std::string_view reason) {
    if (reason.empty()) return fmt::format("Input '{}' is needed. {}", spec.name, spec.hint);
    return fmt::format("Input '{}' was not accepted ({}). {}", spec.name, reason, spec.hint);
}

namespace {

/// Newest valid value in the window, else the note's; reason of the newest
/// rejected extraction otherwise.
ValueCheck resolve_known(const InputSlot& slot, const memory::Window& window,
                         const memory::MemoryNote* note, SlotSource& source) {
    for (auto it = window.rbegin(); it != window.rend(); ++it) {
        if (it->is_note) continue;
        auto check = check_value(slot.spec, it->text);
        if (check.status != ValueCheck::Status::no_match) {
            source = SlotSource::user_text;
            return check;
        }
    }
    if (note) {
        if (const std::string* stored = note->input(slot.spec.name)) {
            source = SlotSource::memory_note;
            return parse_serialized(slot.spec, *stored);
        }
    }
    return {};
}

std::vector<StepEvent> step_retry(ExecutionSession& es, std::string_view latest) {
    std::vector<StepEvent> events;
    for (std::size_t i = 0; i < es.slots().size(); ++i) {
        const auto& spec = es.slots()[i].spec;
        auto check = check_value(spec, latest);
        if (check.status == ValueCheck::Status::invalid) {
            return {{StepEvent::Kind::input_hint, spec.name, input_hint(spec, check.reason), {}}};
        }
        if (check.status == ValueCheck::Status::valid) {
            es.replace(i, *check.value);
            events.push_back({StepEvent::Kind::slot_filled, spec.name,
                              fmt::format("{} = {}", spec.name, serialize_value(*check.value)),
                              SlotSource::user_text});
        }
    }
    if (events.empty()) {
        std::vector<std::string> names;
        for (const auto& s : es.slots()) names.push_back(s.spec.name);
        return {{StepEvent::Kind::input_hint, es.slots().front().spec.name,
                 fmt::format("The last run failed ({}). Send an amended {}.", *es.failure(),
                             fmt::join(names, " or ")),
                 {}}};
    }
    es.mark_ready();
    events.push_back({StepEvent::Kind::ready, {}, "all inputs ready", {}});
    return events;
}

}  // namespace

std::vector<StepEvent> step(ExecutionSession& es, const memory::Window& action_window,
                            std::string_view latest, const memory::MemoryNote* note,
                            backend::DecisionBackend& backend) {
    if (es.phase() != Phase::collecting) throw std::logic_error("execution session is not collecting");
    if (es.failure()) return step_retry(es, latest);

    std::vector<StepEvent> events;
    auto hint = [&](const registry::ParameterSpec& spec, std::string_view reason) {
        es.mark_hinted();
        events.push_back({StepEvent::Kind::input_hint, spec.name, input_hint(spec, reason), {}});
        return events;
    };

    while (es.cursor() < es.slots().size()) {
        const InputSlot& slot = es.slots()[es.cursor()];
        ValueCheck check;
        SlotSource source = SlotSource::user_text;
        if (!es.hinted()) {
            if (decide_state(slot, action_window, note, backend) == InputState::unknown) {
                return hint(slot.spec, {});
            }
            check = resolve_known(slot, action_window, note, source);
        } else {
            check = check_value(slot.spec, latest);
        }
        if (check.status != ValueCheck::Status::valid) return hint(slot.spec, check.reason);

        std::string name = slot.spec.name;
        std::string shown = serialize_value(*check.value);
        es.fill(*check.value, source);
        events.push_back({StepEvent::Kind::slot_filled, name,
                          source == SlotSource::memory_note
                              ? fmt::format("{} = {} (from memory note)", name, shown)
                              : fmt::format("{} = {}", name, shown),
                          source});
    }
    es.mark_ready();
    events.push_back({StepEvent::Kind::ready, {}, "all inputs ready", {}});
    return events;
}

RunOutput execute(ExecutionSession& es, const registry::SimulatorVariant& variant,
                  const ExecutionContext& ctx) {
    if (es.phase() != Phase::ready) throw std::logic_error("execute requires a ready session");
    if (variant.id != es.variant_id()) throw std::logic_error("variant does not match session");

    const InputSlot* temp = es.slot("temperature");
    const InputSlot* matrix = es.slot("porous_matrix");
    if (!temp || !matrix) {
        throw std::logic_error(fmt::format("variant '{}' lacks temperature/porous_matrix inputs", variant.id));
    }
    ldft::ThermoConditions cond = ctx.thermo;
    cond.temperature_kelvin = std::get<double>(*temp->value);
    const auto& m = std::get<ldft::PorousMatrix>(*matrix->value);

    RunOutput out;
    out.variant_id = variant.id;
    out.output = variant.output;
    out.inputs = es.serialized_inputs();
    auto t0 = std::chrono::steady_clock::now();
    if (variant.output == registry::OutputKind::isotherm) {
        out.payload = ldft::compute_isotherm(m, cond, ctx.sweep, ctx.solver);
    } else {
        out.payload = ldft::compute_hysteresis(m, cond, ctx.sweep, ctx.solver);
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    es.mark_done();
    return out;
}

}  // namespace langsim::pipeline
