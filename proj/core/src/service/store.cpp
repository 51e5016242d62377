// SPDX-License-Identifier: Apache-2.0
#include "langsim/service/store.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "langsim/io/csv.hpp"

namespace langsim::service {

namespace fs = std::filesystem;
using nlohmann::json;

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_ / "sessions");
    fs::create_directories(root_ / "runs");
}

fs::path SessionStore::session_dir(const std::string& id) const { return root_ / "sessions" / id; }

namespace {

json read_json(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot open {}", p.string()));
    return json::parse(in);
}

}  // namespace

void SessionStore::save(const Session& s, std::size_t from) {
    auto dir = session_dir(s.id);
    fs::create_directories(dir);
    if (from < s.log.size()) {
        std::ofstream out(dir / "records.jsonl", std::ios::binary | std::ios::app);
        if (!out) throw std::runtime_error(fmt::format("cannot append to {}", (dir / "records.jsonl").string()));
        for (std::size_t i = from; i < s.log.size(); ++i) {
            auto it = s.events.find(s.log[i].seq);
            out << record_json(s.log[i], it == s.events.end() ? nullptr : &it->second).dump() << '\n';
        }
        out.flush();
        if (!out) throw std::runtime_error(fmt::format("write to {} failed", (dir / "records.jsonl").string()));
    }
    io::write_text_file(dir / "state.json", state_json(s).dump(2) + "\n");
}

void SessionStore::save_run(const RunRecord& r) {
    io::write_text_file(root_ / "runs" / (r.run_id + ".json"), run_json(r).dump() + "\n");
}

std::vector<Session> SessionStore::load_sessions(const router::Landscape& landscape) const {
    std::vector<Session> out;
    for (const auto& entry : fs::directory_iterator(root_ / "sessions")) {
        if (!entry.is_directory() || !fs::exists(entry.path() / "state.json")) continue;
        auto state = read_json(entry.path() / "state.json");
        auto last_seq = state.at("last_seq").get<std::uint64_t>();

        Session s;
        apply_state_json(s, state, landscape);
        std::ifstream in(entry.path() / "records.jsonl", std::ios::binary);
        std::string line;
        bool dropped = false;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error&) {
                dropped = true;  // torn final line
                break;
            }
            auto [record, event] = record_from_json(j);
            if (record.seq > last_seq) {
                dropped = true;
                break;
            }
            if (record.seq != s.last_seq() + 1) {
                throw std::runtime_error(fmt::format("{}: record {} out of sequence", entry.path().string(), record.seq));
            }
            if (event) s.events.emplace(record.seq, std::move(*event));
            s.log.push_back(std::move(record));
        }
        if (s.last_seq() != last_seq) {
            throw std::runtime_error(
                fmt::format("{}: state covers record {} but log ends at {}", entry.path().string(), last_seq, s.last_seq()));
        }
        if (dropped) {
            std::string body;
            for (const auto& r : s.log) {
                auto it = s.events.find(r.seq);
                body += record_json(r, it == s.events.end() ? nullptr : &it->second).dump() + "\n";
            }
            io::write_text_file(entry.path() / "records.jsonl", body);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::map<std::string, RunRecord> SessionStore::load_runs() const {
    std::map<std::string, RunRecord> out;
    for (const auto& entry : fs::directory_iterator(root_ / "runs")) {
        if (entry.path().extension() != ".json") continue;
        auto r = run_from_json(read_json(entry.path()));
        auto id = r.run_id;
        out.emplace(std::move(id), std::move(r));
    }
    return out;
}

}  // namespace langsim::service
