// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "langsim/backend/tokens.hpp"

namespace langsim::memory {

enum class Role { user, agent, system_note };

std::string_view to_string(Role r);
Role role_from_string(std::string_view s);

/// One entry of the displayable session log.
///
/// For user records `agent_id` names the agent the text box was linked to
/// when the text arrived; for agent records it names the originator.
struct ChatRecord {
    std::uint64_t seq = 0;
    Role role = Role::user;
    std::string text;
    bool filtered = false;
    std::string agent_id;

    friend bool operator==(const ChatRecord&, const ChatRecord&) = default;
};

/// agent_id prefixes used for linkage targets and originators.
namespace agent_ids {
inline constexpr std::string_view type_prefix = "LM-Type:";
inline constexpr std::string_view sim_prefix = "LM-Sim:";
inline constexpr std::string_view exe_prefix = "LM-EXE:";
inline constexpr std::string_view simulator_prefix = "simulator:";
}  // namespace agent_ids

/// Post-run summary of the simulator settings.
struct MemoryNote {
    std::string variant_id;
    std::vector<std::pair<std::string, std::string>> inputs;  ///< in parameter order
    std::string completed_at;                                 ///< ISO-8601 UTC

    const std::string* input(std::string_view name) const;
    std::string render() const;

    friend bool operator==(const MemoryNote&, const MemoryNote&) = default;
};

/// Builds the note for a finished run. Inputs must already be serialized
/// (numbers in shortest round-trip form, matrices bracketed).
MemoryNote summarize_completed(std::string variant_id,
                               std::vector<std::pair<std::string, std::string>> inputs,
                               std::string completed_at);

enum class AgentRole { lm_type, lm_sim, llm_action, lm_pattern };

std::string_view to_string(AgentRole r);

enum class WindowRule {
    latest_only,            ///< newest text only
    inherited_then_latest,  ///< history inherited upstream on first activation, then newest only
    note_plus_latest,       ///< memory note (if any) with the newest text, else as LM-Sim
    latest_after_hint,      ///< as LM-Sim until an input hint is shown, then newest only
};

struct MemoryPolicy {
    std::map<AgentRole, WindowRule> rules;

    static MemoryPolicy standard();
    /// Throws std::invalid_argument unless all four agent roles are covered.
    void validate() const;
    WindowRule rule_for(AgentRole r) const { return rules.at(r); }
};

struct WindowEntry {
    std::uint64_t seq = 0;  ///< record seq, 0 for the memory note
    std::string text;
    bool is_note = false;

    friend bool operator==(const WindowEntry&, const WindowEntry&) = default;
};

using Window = std::vector<WindowEntry>;

std::vector<std::string> texts(const Window& w);
/// Newest non-note text, empty if none.
std::string_view latest_text(const Window& w);
std::size_t window_tokens(const Window& w);

/// What the windowing needs to know beyond the log itself.
struct MemoryView {
    const MemoryNote* note = nullptr;
    /// Records with seq <= cleared_through are invisible to agents.
    std::uint64_t cleared_through = 0;
    /// An input hint has been shown in the current execution session.
    bool input_hinted = false;
    std::size_t token_budget = backend::default_token_budget;
};

/// Chat-history window of one agent. The newest user record is the text
/// being processed. Filtered records never appear; inherited windows drop
/// whole oldest records until the budget holds.
Window window_for(AgentRole role, std::span<const ChatRecord> log, const MemoryView& view,
                  const MemoryPolicy& policy = MemoryPolicy::standard());

}  // namespace langsim::memory
