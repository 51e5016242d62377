// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "langsim/backend/decision.hpp"
#include "langsim/memory/chat_memory.hpp"
#include "langsim/pipeline/execution.hpp"
#include "langsim/router/landscape.hpp"

namespace langsim::service {

/// The agent the UI text box is linked to.
struct AtTypeNode {
    router::NavigationState nav;
};
struct AtSimFamily {
    std::string leaf;
};
struct AtExecution {
    std::string leaf;
    pipeline::ExecutionSession exe;
};
using Linkage = std::variant<AtTypeNode, AtSimFamily, AtExecution>;

std::string_view linkage_name(const Linkage& l);  ///< "type", "sim" or "execution"

enum class EventKind { hint, descent, variant, slot, result, error };

std::string_view to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

/// One reply event of a message. `label` is the node, variant or parameter
/// the event is about; `text` is what the user sees.
struct Event {
    EventKind kind = EventKind::hint;
    std::string label;
    std::string text;
    std::string agent_id;
    std::optional<std::string> run_id;
    bool pending = false;  ///< result events of runs still executing

    friend bool operator==(const Event&, const Event&) = default;
};

/// Message rejected before it reached any agent.
class InvalidMessage : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct Session {
    std::string id;
    std::vector<memory::ChatRecord> log;
    std::map<std::uint64_t, Event> events;  ///< agent record seq -> event
    Linkage linkage;
    std::optional<memory::MemoryNote> note;
    std::uint64_t cleared_through = 0;
    std::vector<std::string> runs;
    std::optional<std::string> in_flight;  ///< run id of an unfinished run

    std::uint64_t last_seq() const { return log.empty() ? 0 : log.back().seq; }
};

Session new_session(std::string id, const router::TypeHierarchy& h);

/// A ready execution handed to the caller to run.
struct RunJob {
    std::string run_id;
    std::string session_id;
    std::string leaf;
    pipeline::ExecutionSession exe;
    registry::SimulatorVariant variant;
};

struct PostResult {
    std::vector<Event> events;
    std::optional<RunJob> job;  ///< set when the caller must execute
};

/// How a RunJob ended.
struct RunOutcome {
    std::string run_id;
    std::variant<pipeline::RunOutput, std::string> result;  ///< output or failure text
    std::string completed_at;
};

/// Called with every window an agent consumes.
using WindowObserver = std::function<void(memory::AgentRole, const memory::Window&)>;

/// Per-session dialogue logic: the linkage state machine and the cascade of
/// LM-Type, LM-Sim and LM-EXE over one text. Not thread-safe; callers
/// serialize access per session.
class Dialogue {
  public:
    Dialogue(const router::Landscape& landscape, std::size_t token_budget = backend::default_token_budget);

    void set_window_observer(WindowObserver obs) { observer_ = std::move(obs); }

    /// Appends the user record and runs the dispatch cascade. On reaching a
    /// ready execution a RunJob with a fresh id is returned and no records
    /// for it are written; pass its outcome to complete(). Throws
    /// InvalidMessage for empty or over-budget text.
    PostResult post(Session& s, std::string_view text, backend::DecisionBackend& backend,
                    const std::function<std::string()>& next_run_id);

    /// Applies a run outcome: result or error record, memory note and clear,
    /// one step back to the simulator family. Returns the events appended.
    std::vector<Event> complete(Session& s, const RunJob& job, const RunOutcome& outcome);

    /// Records that `job` runs in the background; the session is busy until
    /// complete() is called.
    Event mark_pending(Session& s, const RunJob& job);

    const router::Landscape& landscape() const { return landscape_; }

  private:
    memory::Window window(memory::AgentRole role, const Session& s, bool hinted) const;

    const router::Landscape& landscape_;
    std::size_t token_budget_;
    WindowObserver observer_;
};

/// Events and run of one message, running ready jobs in-process. Used by
/// replay and tests, and by the service for small grids.
std::vector<Event> post_and_run(Dialogue& d, Session& s, std::string_view text,
                                backend::DecisionBackend& backend, const pipeline::ExecutionContext& ctx,
                                const std::function<std::string()>& next_run_id,
                                std::optional<pipeline::RunOutput>* output = nullptr);

/// Executes a job; solver failures become the failure text.
RunOutcome run_job(const RunJob& job, const pipeline::ExecutionContext& ctx);

/// Current UTC time as ISO-8601 with seconds.
std::string utc_now();

}  // namespace langsim::service
