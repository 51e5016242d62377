// SPDX-License-Identifier: Apache-2.0
#include "langsim/backend/remote.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace langsim::backend {

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos;
         pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
}

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw BackendUnavailable(fmt::format("endpoint '{}' has no scheme", url));
    }
    if (url.compare(0, scheme_end, "http") != 0) {
        throw BackendUnavailable(fmt::format("endpoint '{}': only http:// is supported", url));
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

/// Pulls the assistant text out of the common completion envelopes; falls
/// back to the raw body.
std::string reply_text(const std::string& body) {
    auto parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) return body;
    if (auto it = parsed.find("choices"); it != parsed.end() && it->is_array() && !it->empty()) {
        const auto& first = (*it)[0];
        if (first.contains("message") && first["message"].contains("content") &&
            first["message"]["content"].is_string()) {
            return first["message"]["content"].get<std::string>();
        }
        if (first.contains("text") && first["text"].is_string()) {
            return first["text"].get<std::string>();
        }
    }
    if (auto it = parsed.find("content"); it != parsed.end() && it->is_string()) {
        return it->get<std::string>();
    }
    return body;
}

}  // namespace

std::string default_template(AgentKind kind) {
    switch (kind) {
        case AgentKind::type:
            return "You categorize materials simulation requests.\n"
                   "Candidate simulation types: {labels}\n"
                   "Request:\n{context}\n"
                   "Answer with a single json object {\"action\": \"<type>\"} naming one "
                   "candidate, or {\"action\": \"hint\"} if the request does not determine one.";
        case AgentKind::sim:
            return "You select a simulator for a materials simulation request.\n"
                   "Available simulators: {labels}\n"
                   "Conversation:\n{context}\n"
                   "Answer with a single json object {\"action\": \"<simulator>\"} naming one "
                   "available simulator, or {\"action\": \"hint\"} if none is requested.";
        case AgentKind::input_state:
            return "Decide whether the conversation already provides the simulator input "
                   "described below.\nStates: {labels}\n"
                   "Conversation:\n{context}\n"
                   "Answer with a single json object {\"action\": \"known\"} or "
                   "{\"action\": \"unknown\"}.";
    }
    return {};
}

RemoteBackendConfig RemoteBackendConfig::with_default_templates() {
    RemoteBackendConfig cfg;
    for (auto k : {AgentKind::type, AgentKind::sim, AgentKind::input_state}) {
        cfg.templates[k] = default_template(k);
    }
    return cfg;
}

void RemoteBackendConfig::load_templates(const std::filesystem::path& dir) {
    for (auto k : {AgentKind::type, AgentKind::sim, AgentKind::input_state}) {
        auto path = dir / (std::string(to_string(k)) + ".txt");
        std::ifstream in(path);
        if (!in) continue;
        std::ostringstream ss;
        ss << in.rdbuf();
        templates[k] = ss.str();
    }
    validate();
}

void RemoteBackendConfig::validate() const {
    for (const auto& [kind, tmpl] : templates) {
        if (tmpl.find("{labels}") == std::string::npos ||
            tmpl.find("{context}") == std::string::npos) {
            throw std::invalid_argument(fmt::format(
                "prompt template for '{}' needs {{labels}} and {{context}}", to_string(kind)));
        }
    }
}

std::string render_prompt(const DecisionRequest& req, const std::string& tmpl,
                          std::size_t max_tokens) {
    std::string labels = fmt::format("{}", fmt::join(req.candidate_labels, ", "));
    if (req.parameter_name) labels += fmt::format(" (input: {})", *req.parameter_name);

    std::size_t first = 0;
    for (;;) {
        std::string context;
        for (std::size_t i = first; i < req.context.size(); ++i) {
            if (!context.empty()) context += '\n';
            context += req.context[i];
        }
        std::string out = tmpl;
        replace_all(out, "{labels}", labels);
        replace_all(out, "{context}", context);
        if (estimate_tokens(out) <= max_tokens || first + 1 >= req.context.size()) return out;
        ++first;
    }
}

std::optional<nlohmann::json> first_json_object(std::string_view text) {
    for (std::size_t start = text.find('{'); start != std::string_view::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            char ch = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (ch == '\\') {
                    escaped = true;
                } else if (ch == '"') {
                    in_string = false;
                }
                continue;
            }
            if (ch == '"') {
                in_string = true;
            } else if (ch == '{') {
                ++depth;
            } else if (ch == '}' && --depth == 0) {
                auto parsed = nlohmann::json::parse(text.substr(start, i - start + 1), nullptr,
                                                    false);
                if (!parsed.is_discarded() && parsed.is_object()) return parsed;
                break;
            }
        }
    }
    return std::nullopt;
}

AgentDecision parse_action_reply(std::string_view reply, const DecisionRequest& req) {
    auto obj = first_json_object(reply);
    if (!obj) throw MalformedAction("reply contains no json object");
    auto it = obj->find("action");
    if (it == obj->end() || !it->is_string()) {
        throw MalformedAction("json reply has no string 'action'");
    }
    auto action = it->get<std::string>();
    if (action == "hint") return {Hint{list_hint(req.candidate_labels)}, 0.0};
    if (!req.has_label(action)) {
        throw MalformedAction(fmt::format("action '{}' is not a candidate label", action));
    }
    return {Selected{action}, 1.0};
}

AgentDecision remote_classify(const DecisionRequest& req, const RemoteBackendConfig& cfg) {
    req.validate();
    auto tmpl_it = cfg.templates.find(req.kind);
    std::string tmpl = tmpl_it != cfg.templates.end() ? tmpl_it->second : default_template(req.kind);
    std::string prompt = render_prompt(req, tmpl, cfg.max_context_tokens);

    nlohmann::json body = {
        {"model", cfg.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", 0},
    };

    auto ep = split_endpoint(cfg.endpoint);
    httplib::Client client(ep.origin);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    if (!cfg.api_key_env.empty()) {
        if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", fmt::format("Bearer {}", key));
        }
    }

    auto res = client.Post(ep.path, headers, body.dump(), "application/json");
    if (!res) {
        throw BackendUnavailable(
            fmt::format("request to {} failed: {}", cfg.endpoint, httplib::to_string(res.error())));
    }
    if (res->status < 200 || res->status >= 300) {
        throw BackendUnavailable(fmt::format("endpoint {} returned HTTP {}", cfg.endpoint, res->status));
    }
    return parse_action_reply(reply_text(res->body), req);
}

RemoteBackend::RemoteBackend(RemoteBackendConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

AgentDecision RemoteBackend::decide(const DecisionRequest& req, const Lexicon&) {
    try {
        auto d = remote_classify(req, cfg_);
        last_error_.clear();
        return d;
    } catch (const BackendUnavailable& e) {
        last_error_ = e.what();
    } catch (const MalformedAction& e) {
        last_error_ = e.what();
    }
    return {Hint{list_hint(req.candidate_labels)}, 0.0};
}

}  // namespace langsim::backend
