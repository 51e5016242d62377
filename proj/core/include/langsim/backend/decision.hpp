// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace langsim::backend {

/// Which agent contract a request is for.
enum class AgentKind { type, sim, input_state };

std::string_view to_string(AgentKind k);

inline constexpr std::string_view known_label = "known";
inline constexpr std::string_view unknown_label = "unknown";

struct DecisionRequest {
    AgentKind kind = AgentKind::type;
    std::vector<std::string> candidate_labels;
    std::vector<std::string> context;  ///< oldest first; the last entry is the newest text
    std::optional<std::string> parameter_name;

    /// Throws std::invalid_argument on an empty or duplicated label set, or
    /// an input-state request whose labels are not {known, unknown}.
    void validate() const;
    bool has_label(std::string_view label) const;
};

struct Selected {
    std::string label;
};

struct Hint {
    std::string text;
};

struct AgentDecision {
    std::variant<Selected, Hint> outcome;
    /// Best lexicon score behind the decision. Zero means nothing in the text
    /// was relevant to this agent.
    double score = 0.0;

    bool selected() const { return std::holds_alternative<Selected>(outcome); }
    const std::string& label() const { return std::get<Selected>(outcome).label; }
    const std::string& hint_text() const { return std::get<Hint>(outcome).text; }
};

struct Phrase {
    std::string text;
    double weight = 1.0;
};

/// Weighted trigger phrases per candidate label.
struct Lexicon {
    std::map<std::string, std::vector<Phrase>> entries;
    double confidence_threshold = 1.0;

    void add(const std::string& label, std::string phrase, double weight = 1.0);
    /// Throws std::invalid_argument on an empty phrase or non-positive weight.
    void validate() const;
};

/// Case-insensitive match of `phrase` in `text` where neither end of the
/// match touches an alphanumeric character.
bool contains_phrase(std::string_view text, std::string_view phrase);

/// Default hint when no agent-specific wording is available.
std::string list_hint(const std::vector<std::string>& labels);

/// Deterministic lexicon scoring of the newest context text.
///
/// Each label scores the weight-sum of its phrases present in the text. The
/// argmax is selected only if it is unique and reaches the threshold; any
/// other case yields a Hint listing the candidates.
AgentDecision classify(const DecisionRequest& req, const Lexicon& lex);

/// The decision contract every LM-agent is driven through.
class DecisionBackend {
  public:
    virtual ~DecisionBackend() = default;

    virtual AgentDecision decide(const DecisionRequest& req, const Lexicon& lex) = 0;

    /// True if input-state decisions should be made by pattern matching in
    /// the caller rather than by this backend.
    virtual bool pattern_input_state() const = 0;
};

class LexiconBackend final : public DecisionBackend {
  public:
    AgentDecision decide(const DecisionRequest& req, const Lexicon& lex) override {
        return classify(req, lex);
    }
    bool pattern_input_state() const override { return true; }
};

}  // namespace langsim::backend
