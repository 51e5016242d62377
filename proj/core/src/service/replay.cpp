// SPDX-License-Identifier: Apache-2.0
#include "langsim/service/replay.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace langsim::service {

TranscriptError::TranscriptError(std::size_t line, const std::string& message)
    : std::runtime_error(fmt::format("line {}: {}", line, message)), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool free_text(EventKind k) { return k == EventKind::hint || k == EventKind::error; }

}  // namespace

std::vector<TranscriptTurn> parse_transcript(std::string_view text) {
    std::vector<TranscriptTurn> turns;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.size() < 2 || line[1] != ' ' || (line[0] != '>' && line[0] != '<')) {
            throw TranscriptError(line_no, "expected '> text', '< kind label' or '# comment'");
        }
        auto body = trim(line.substr(2));
        if (line[0] == '>') {
            if (body.empty()) throw TranscriptError(line_no, "empty user text");
            turns.push_back({line_no, std::string(body), {}});
            continue;
        }
        if (turns.empty()) throw TranscriptError(line_no, "expected event before any user text");
        auto space = body.find(' ');
        auto kind_word = body.substr(0, space);
        Expectation x;
        x.line = line_no;
        try {
            x.kind = event_kind_from_string(kind_word);
        } catch (const std::invalid_argument& e) {
            throw TranscriptError(line_no, e.what());
        }
        if (space != std::string_view::npos) x.label = std::string(trim(body.substr(space + 1)));
        if (x.label.empty() && !free_text(x.kind)) {
            throw TranscriptError(line_no, fmt::format("'{}' expectations need a label", kind_word));
        }
        turns.back().expected.push_back(std::move(x));
    }
    return turns;
}

std::vector<TranscriptTurn> load_transcript(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open transcript {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_transcript(ss.str());
}

bool matches(const Expectation& x, const Event& e) {
    if (x.kind != e.kind) return false;
    if (free_text(x.kind)) return e.text.compare(0, x.label.size(), x.label) == 0;
    return e.label == x.label;
}

std::string event_line(const Event& e) {
    return fmt::format("< {} {}", to_string(e.kind), free_text(e.kind) ? e.text : e.label);
}

namespace {

std::string expectation_line(const Expectation& x) {
    return x.label.empty() ? fmt::format("< {}", to_string(x.kind)) : fmt::format("< {} {}", to_string(x.kind), x.label);
}

std::string diff(const TranscriptTurn& turn, const std::vector<Event>& got) {
    std::string out = fmt::format("--- expected (line {})\n", turn.line);
    for (const auto& x : turn.expected) out += fmt::format("-{}\n", expectation_line(x));
    out += "+++ produced\n";
    for (const auto& e : got) out += fmt::format("+{}\n", event_line(e));
    return out;
}

}  // namespace

ReplayReport replay(const std::vector<TranscriptTurn>& turns, const router::Landscape& landscape,
                    backend::DecisionBackend& backend, const pipeline::ExecutionContext& ctx) {
    Dialogue dialogue(landscape);
    Session session = new_session("replay", landscape.hierarchy);
    std::size_t runs = 0;
    auto next_run = [&] { return fmt::format("replay-{}", ++runs); };

    ReplayReport report;
    auto fail = [&](std::size_t line, std::string message) {
        if (!report.ok) return;
        report.ok = false;
        report.line = line;
        report.message = std::move(message);
    };
    for (const auto& turn : turns) {
        std::vector<Event> got;
        try {
            got = post_and_run(dialogue, session, turn.text, backend, ctx, next_run);
        } catch (const InvalidMessage& e) {
            fail(turn.line, fmt::format("line {}: message rejected: {}", turn.line, e.what()));
            report.produced.emplace_back();
            continue;
        }
        std::size_t n = std::min(got.size(), turn.expected.size());
        for (std::size_t i = 0; i <= n && report.ok; ++i) {
            if (i == n && got.size() == turn.expected.size()) break;
            if (i < n && matches(turn.expected[i], got[i])) continue;
            if (i < turn.expected.size()) {
                fail(turn.expected[i].line,
                     fmt::format("line {}: expected `{}`, got {}", turn.expected[i].line,
                                 expectation_line(turn.expected[i]),
                                 i < got.size() ? fmt::format("`{}`", event_line(got[i])) : "no event"));
            } else {
                fail(turn.line, fmt::format("line {}: unexpected extra event `{}`", turn.line, event_line(got[i])));
            }
            report.message += "\n" + diff(turn, got);
        }
        report.produced.push_back(std::move(got));
    }
    return report;
}

}  // namespace langsim::service
