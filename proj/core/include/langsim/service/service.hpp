// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "langsim/service/config.hpp"
#include "langsim/service/store.hpp"

namespace langsim::service {

class NotFound : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// The session is processing a message or waiting for a run.
class Busy : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PostReply {
    std::vector<Event> events;
    Linkage linkage;
};

/// Thread-safe owner of all sessions and runs. Messages of one session are
/// serialized; sessions proceed in parallel; large runs go to a worker pool.
/// With a data directory every change is persisted before it is returned.
class SessionService {
  public:
    /// Loads persisted sessions and runs from `cfg.data_dir` (unless
    /// `persist` is false) and requeues runs that were in flight.
    explicit SessionService(ServiceConfig cfg, bool persist = true);
    ~SessionService();

    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    std::string create_session();
    /// Throws NotFound, Busy or InvalidMessage.
    PostReply post_message(const std::string& session_id, const std::string& text);
    Session snapshot(const std::string& session_id) const;
    RunRecord get_run(const std::string& run_id) const;
    std::vector<std::string> session_ids() const;

    /// Blocks until no run is queued or executing.
    void wait_idle();

    const router::Landscape& landscape() const { return landscape_; }
    const ServiceConfig& config() const { return cfg_; }

  private:
    struct Entry {
        mutable std::mutex mutex;
        Session session;
    };

    Entry& entry(const std::string& id) const;
    std::string next_run_id();
    void store_run(const RunRecord& r);
    void enqueue(RunJob job);
    void worker_loop();
    void finish(const RunJob& job, const RunOutcome& outcome);

    ServiceConfig cfg_;
    router::Landscape landscape_;
    Dialogue dialogue_;
    std::unique_ptr<SessionStore> store_;

    mutable std::mutex sessions_mutex_;
    std::map<std::string, std::unique_ptr<Entry>> sessions_;
    mutable std::mutex runs_mutex_;
    std::map<std::string, RunRecord> runs_;
    std::atomic<std::uint64_t> session_counter_{0};
    std::atomic<std::uint64_t> run_counter_{0};

    std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::condition_variable idle_cv_;
    std::deque<RunJob> queue_;
    std::size_t active_ = 0;
    bool stopping_ = false;
    std::vector<std::thread> workers_;
};

}  // namespace langsim::service
