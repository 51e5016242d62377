// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "langsim/service/session.hpp"

namespace langsim::service {

enum class RunStatus { pending, done, failed };

std::string_view to_string(RunStatus s);
RunStatus run_status_from_string(std::string_view s);

/// A run as stored and served.
struct RunRecord {
    std::string run_id;
    std::string session_id;
    std::string variant_id;
    registry::OutputKind output = registry::OutputKind::isotherm;
    RunStatus status = RunStatus::pending;
    std::vector<std::pair<std::string, std::string>> inputs;
    double wall_seconds = 0.0;
    std::optional<std::variant<ldft::IsothermCurve, ldft::HysteresisLoop>> payload;
    std::string error;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

RunRecord pending_run(const RunJob& job);
RunRecord finished_run(const RunJob& job, const RunOutcome& outcome);

/// JSON forms shared by persistence and the HTTP API. Decoders throw
/// std::invalid_argument (or nlohmann::json::exception) on bad input.
nlohmann::json event_json(const Event& e);
Event event_from_json(const nlohmann::json& j);

/// A log record, carrying its reply event when it has one.
nlohmann::json record_json(const memory::ChatRecord& r, const Event* e);
std::pair<memory::ChatRecord, std::optional<Event>> record_from_json(const nlohmann::json& j);

nlohmann::json note_json(const memory::MemoryNote& n);
memory::MemoryNote note_from_json(const nlohmann::json& j);

nlohmann::json linkage_json(const Linkage& l);
/// Parameter specs of an execution linkage are taken from `landscape`.
Linkage linkage_from_json(const nlohmann::json& j, const router::Landscape& landscape);

/// Everything but the log: linkage, note, clear point, runs.
nlohmann::json state_json(const Session& s);
void apply_state_json(Session& s, const nlohmann::json& j, const router::Landscape& landscape);

/// `rh[]`, `density[]`, plus `density_des[]` (ascending RH) for loops.
nlohmann::json run_json(const RunRecord& r);
RunRecord run_from_json(const nlohmann::json& j);

/// Full history response: id, linkage and every record.
nlohmann::json history_json(const Session& s);

nlohmann::json registry_json(const router::Landscape& landscape);

}  // namespace langsim::service
