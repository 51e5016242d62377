// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "langsim/backend/decision.hpp"
#include "langsim/backend/tokens.hpp"

namespace langsim::backend {

class BackendUnavailable : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The reply had no usable json action, or named a label outside the request.
class MalformedAction : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Client settings for a chat-completion style HTTP endpoint.
///
/// Templates are plain text containing `{labels}` and `{context}`; they must
/// ask for a single json object `{"action": <label>}` or `{"action": "hint"}`.
struct RemoteBackendConfig {
    std::string endpoint = "http://127.0.0.1:8000/v1/chat/completions";
    std::string model = "llama-2-7b-chat";
    std::map<AgentKind, std::string> templates;
    std::chrono::milliseconds timeout{30000};
    std::size_t max_context_tokens = default_token_budget;
    /// Name of the environment variable holding a bearer token; unset or
    /// empty means no Authorization header.
    std::string api_key_env = "LANGSIM_API_KEY";

    static RemoteBackendConfig with_default_templates();
    /// Reads `<dir>/<kind>.txt` for each kind that exists (type.txt, sim.txt,
    /// input-state.txt), keeping defaults for missing files.
    void load_templates(const std::filesystem::path& dir);
    void validate() const;
};

std::string default_template(AgentKind kind);

/// Substitutes `{labels}` and `{context}`. Oldest context entries are
/// dropped whole until the rendered prompt fits `max_tokens`.
std::string render_prompt(const DecisionRequest& req, const std::string& tmpl,
                          std::size_t max_tokens = default_token_budget);

/// First balanced `{...}` span in `text` that parses as JSON.
std::optional<nlohmann::json> first_json_object(std::string_view text);

/// Maps a model reply to a decision. `{"action":"hint"}` -> Hint; a label
/// from the request -> Selected. Anything else throws MalformedAction.
AgentDecision parse_action_reply(std::string_view reply, const DecisionRequest& req);

/// Renders, posts and parses. Throws BackendUnavailable on transport
/// failures or non-2xx statuses, MalformedAction on unusable replies.
AgentDecision remote_classify(const DecisionRequest& req, const RemoteBackendConfig& cfg);

/// DecisionBackend adapter that degrades every remote failure to a Hint.
class RemoteBackend final : public DecisionBackend {
  public:
    explicit RemoteBackend(RemoteBackendConfig cfg);

    AgentDecision decide(const DecisionRequest& req, const Lexicon& lex) override;
    bool pattern_input_state() const override { return false; }

    /// Message of the most recent degraded call, for diagnostics.
    const std::string& last_error() const { return last_error_; }

  private:
    RemoteBackendConfig cfg_;
    std::string last_error_;
};

}  // namespace langsim::backend
