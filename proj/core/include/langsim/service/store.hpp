// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "langsim/service/codec.hpp"

namespace langsim::service {

/// On-disk layout under `root`:
///   sessions/<id>/records.jsonl  one record per line, append-only
///   sessions/<id>/state.json     linkage snapshot, replaced atomically
///   runs/<id>.json               run results
///
/// A session's state names the last record it covers; record lines past it
/// (a crash between the two writes) are dropped on load.
class SessionStore {
  public:
    explicit SessionStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    /// Appends log records from index `from` and then replaces the state.
    void save(const Session& s, std::size_t from);
    void save_run(const RunRecord& r);

    std::vector<Session> load_sessions(const router::Landscape& landscape) const;
    std::map<std::string, RunRecord> load_runs() const;

  private:
    std::filesystem::path session_dir(const std::string& id) const;

    std::filesystem::path root_;
};

}  // namespace langsim::service
