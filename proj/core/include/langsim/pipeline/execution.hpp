// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "langsim/backend/decision.hpp"
#include "langsim/ldft/sweep.hpp"
#include "langsim/memory/chat_memory.hpp"
#include "langsim/registry/registry.hpp"

namespace langsim::pipeline {

enum class SlotSource { user_text, memory_note };

std::string_view to_string(SlotSource s);

using SlotValue = std::variant<double, ldft::PorousMatrix>;

/// Text form used in memory notes and persisted state.
std::string serialize_value(const SlotValue& v);

struct InputSlot {
    registry::ParameterSpec spec;
    std::optional<SlotValue> value;
    SlotSource source = SlotSource::user_text;

    bool filled() const { return value.has_value(); }
};

enum class Phase { collecting, ready, done };

std::string_view to_string(Phase p);

/// The LM-EXE stack of one simulator run: one slot per tool parameter, in
/// declared order, filled strictly front to back.
class ExecutionSession {
  public:
    ExecutionSession(std::string variant_id, const registry::ToolFunction& tool);

    const std::string& variant_id() const { return variant_id_; }
    const std::vector<InputSlot>& slots() const { return slots_; }
    std::size_t cursor() const { return cursor_; }
    Phase phase() const { return phase_; }
    /// An input hint has been shown; the LLM-Action side is dormant and only
    /// the newest text is fed to the pattern side.
    bool hinted() const { return hinted_; }
    /// Set after a failed run: new text may amend filled slots.
    const std::optional<std::string>& failure() const { return failure_; }

    const InputSlot* slot(std::string_view name) const;

    void fill(const SlotValue& value, SlotSource source);
    void replace(std::size_t index, const SlotValue& value);
    void mark_hinted() { hinted_ = true; }
    void mark_done();
    /// The run failed; slots stay filled and the session collects amendments.
    void mark_failed(std::string reason);
    void mark_ready();

    std::vector<std::pair<std::string, std::string>> serialized_inputs() const;

    /// Rebuilds a persisted session; throws std::invalid_argument when the
    /// state breaks the cursor/phase invariants.
    static ExecutionSession restore(std::string variant_id, std::vector<InputSlot> slots, Phase phase,
                                    bool hinted, std::optional<std::string> failure);

  private:
    ExecutionSession() = default;
    void check_invariants() const;

    std::string variant_id_;
    std::vector<InputSlot> slots_;
    std::size_t cursor_ = 0;
    Phase phase_ = Phase::collecting;
    bool hinted_ = false;
    std::optional<std::string> failure_;
};

/// Pattern-side result for one slot and one text.
struct ValueCheck {
    enum class Status { valid, invalid, no_match } status = Status::no_match;
    std::optional<SlotValue> value;
    std::string reason;  ///< why an extracted value was rejected
};

/// Extracts and validates a value for `spec` from `text`. Numbers are read
/// with matrix spans masked out; matrices must be rectangular, inside the
/// entry bounds, within the size cap and contain at least one pore site.
ValueCheck check_value(const registry::ParameterSpec& spec, std::string_view text);

/// Bounds and pore checks on an already parsed value.
ValueCheck validate_value(const registry::ParameterSpec& spec, SlotValue value);

/// Re-reads a serialized value (as stored in a memory note).
ValueCheck parse_serialized(const registry::ParameterSpec& spec, std::string_view text);

enum class InputState { known, unknown };

/// LLM-Action: is the value for `slot` available in the window? The
/// deterministic route is a pattern hit in any window text or a note entry
/// for the parameter; a remote backend answers an input-state request.
InputState decide_state(const InputSlot& slot, const memory::Window& window,
                        const memory::MemoryNote* note, backend::DecisionBackend& backend);

struct StepEvent {
    enum class Kind { slot_filled, input_hint, ready } kind;
    std::string parameter;
    std::string text;
    SlotSource source = SlotSource::user_text;
};

/// Text of the input hint for a slot, optionally with a rejection reason.
std::string input_hint(const registry::ParameterSpec& spec, std::string_view reason = {});

/// One message into the LM-EXE stack. `action_window` is the LLM-Action
/// window (used until the first hint), `latest` the newest user text.
/// A message that fills the cursor slot is re-scanned for the next one.
std::vector<StepEvent> step(ExecutionSession& es, const memory::Window& action_window,
                            std::string_view latest, const memory::MemoryNote* note,
                            backend::DecisionBackend& backend);

/// Solver settings a run is executed with; temperature comes from the slot.
struct ExecutionContext {
    ldft::ThermoConditions thermo;
    ldft::SweepSpec sweep;
    ldft::SolverConfig solver;
};

struct RunOutput {
    std::string variant_id;
    registry::OutputKind output = registry::OutputKind::isotherm;
    std::variant<ldft::IsothermCurve, ldft::HysteresisLoop> payload;
    std::vector<std::pair<std::string, std::string>> inputs;
    double wall_seconds = 0.0;
};

/// Runs the tool function on a ready session and marks it done. Throws
/// std::logic_error unless the session is ready; solver errors propagate
/// and leave the session ready so the caller can mark it failed.
RunOutput execute(ExecutionSession& es, const registry::SimulatorVariant& variant,
                  const ExecutionContext& ctx);

}  // namespace langsim::pipeline
