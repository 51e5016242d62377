// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "langsim/service/session.hpp"

namespace langsim::service {

/// Transcript format, one item per line:
///   > user text            a message to post
///   < kind label           an expected event, in order
///   # ...                  comment; blank lines are ignored
/// For hint and error events the label is a prefix of the event text; for
/// the other kinds it must equal the node, variant or parameter id.
struct Expectation {
    std::size_t line = 0;
    EventKind kind = EventKind::hint;
    std::string label;
};

struct TranscriptTurn {
    std::size_t line = 0;
    std::string text;
    std::vector<Expectation> expected;
};

class TranscriptError : public std::runtime_error {
  public:
    TranscriptError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

std::vector<TranscriptTurn> parse_transcript(std::string_view text);
std::vector<TranscriptTurn> load_transcript(const std::filesystem::path& path);

bool matches(const Expectation& x, const Event& e);
/// `< kind label` line for an event (hint/error show their full text).
std::string event_line(const Event& e);

struct ReplayReport {
    bool ok = true;
    std::size_t line = 0;  ///< first mismatching transcript line
    std::string message;   ///< mismatch explanation with an expected/actual diff
    std::vector<std::vector<Event>> produced;  ///< events of every turn
};

/// Feeds every turn into a fresh session with the given backend and
/// compares events; runs execute in-process. All turns are played even
/// after a mismatch; the report names the first one.
ReplayReport replay(const std::vector<TranscriptTurn>& turns, const router::Landscape& landscape,
                    backend::DecisionBackend& backend, const pipeline::ExecutionContext& ctx);

}  // namespace langsim::service
