// SPDX-License-Identifier: Apache-2.0
#include "langsim/backend/decision.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <set>

#include "langsim/backend/tokens.hpp"

namespace langsim::backend {

std::string_view to_string(AgentKind k) {
    switch (k) {
        case AgentKind::type: return "type";
        case AgentKind::sim: return "sim";
        case AgentKind::input_state: return "input-state";
    }
    return "type";
}

std::size_t estimate_tokens(std::string_view text) {
    std::size_t words = 0;
    bool in_word = false;
    for (char ch : text) {
        bool space = std::isspace(static_cast<unsigned char>(ch)) != 0;
        if (!space && !in_word) ++words;
        in_word = !space;
    }
    return (words * 13 + 9) / 10;
}

void DecisionRequest::validate() const {
    if (candidate_labels.empty()) throw std::invalid_argument("decision request has no labels");
    std::set<std::string> seen(candidate_labels.begin(), candidate_labels.end());
    if (seen.size() != candidate_labels.size()) {
        throw std::invalid_argument("decision request labels are not unique");
    }
    if (kind == AgentKind::input_state) {
        std::set<std::string> expected{std::string(known_label), std::string(unknown_label)};
        if (seen != expected) {
            throw std::invalid_argument("input-state requests must offer exactly known/unknown");
        }
    }
}

bool DecisionRequest::has_label(std::string_view label) const {
    return std::find(candidate_labels.begin(), candidate_labels.end(), label) !=
           candidate_labels.end();
}

void Lexicon::add(const std::string& label, std::string phrase, double weight) {
    entries[label].push_back({std::move(phrase), weight});
}

void Lexicon::validate() const {
    for (const auto& [label, phrases] : entries) {
        for (const auto& p : phrases) {
            if (p.text.empty()) {
                throw std::invalid_argument(fmt::format("empty phrase for label '{}'", label));
            }
            if (!(p.weight > 0.0)) {
                throw std::invalid_argument(
                    fmt::format("phrase '{}' for '{}' needs a positive weight", p.text, label));
            }
        }
    }
}

namespace {

bool is_word_char(char ch) { return std::isalnum(static_cast<unsigned char>(ch)) != 0; }

char lower(char ch) { return static_cast<char>(std::tolower(static_cast<unsigned char>(ch))); }

}  // namespace

bool contains_phrase(std::string_view text, std::string_view phrase) {
    if (phrase.empty() || phrase.size() > text.size()) return false;
    for (std::size_t pos = 0; pos + phrase.size() <= text.size(); ++pos) {
        bool match = true;
        for (std::size_t k = 0; k < phrase.size(); ++k) {
            if (lower(text[pos + k]) != lower(phrase[k])) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        bool left_ok = pos == 0 || !is_word_char(text[pos - 1]) || !is_word_char(phrase.front());
        std::size_t end = pos + phrase.size();
        bool right_ok =
            end == text.size() || !is_word_char(text[end]) || !is_word_char(phrase.back());
        if (left_ok && right_ok) return true;
    }
    return false;
}

std::string list_hint(const std::vector<std::string>& labels) {
    return fmt::format("Please choose one of: {}.", fmt::join(labels, ", "));
}

AgentDecision classify(const DecisionRequest& req, const Lexicon& lex) {
    req.validate();
    std::string_view latest = req.context.empty() ? std::string_view{} : req.context.back();

    double best = 0.0;
    std::size_t best_count = 0;
    const std::string* best_label = nullptr;
    for (const auto& label : req.candidate_labels) {
        double score = 0.0;
        if (auto it = lex.entries.find(label); it != lex.entries.end()) {
            for (const auto& p : it->second) {
                if (contains_phrase(latest, p.text)) score += p.weight;
            }
        }
        if (score > best) {
            best = score;
            best_count = 1;
            best_label = &label;
        } else if (score == best && score > 0.0) {
            ++best_count;
        }
    }

    if (best_label != nullptr && best_count == 1 && best >= lex.confidence_threshold) {
        return {Selected{*best_label}, best};
    }
    return {Hint{list_hint(req.candidate_labels)}, best};
}

}  // namespace langsim::backend
