// SPDX-License-Identifier: Apache-2.0
#include "langsim/service/service.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>

namespace langsim::service {

namespace {

std::uint64_t id_number(const std::string& id) {
    auto dash = id.find('-');
    std::uint64_t n = 0;
    if (dash == std::string::npos) return 0;
    std::from_chars(id.data() + dash + 1, id.data() + id.size(), n);
    return n;
}

std::size_t largest_matrix_side(const pipeline::ExecutionSession& exe) {
    std::size_t side = 0;
    for (const auto& slot : exe.slots()) {
        if (const auto* m = slot.value ? std::get_if<ldft::PorousMatrix>(&*slot.value) : nullptr) {
            side = std::max({side, m->rows(), m->cols()});
        }
    }
    return side;
}

router::Landscape load(const ServiceConfig& cfg) {
    return cfg.landscape ? router::load_landscape(*cfg.landscape) : router::default_landscape();
}

}  // namespace

SessionService::SessionService(ServiceConfig cfg, bool persist)
    : cfg_(std::move(cfg)), landscape_(load(cfg_)), dialogue_(landscape_, cfg_.token_budget) {
    cfg_.validate();
    std::vector<RunJob> resume;
    if (persist) {
        store_ = std::make_unique<SessionStore>(cfg_.data_dir);
        runs_ = store_->load_runs();
        for (const auto& [id, r] : runs_) run_counter_ = std::max<std::uint64_t>(run_counter_, id_number(id));
        for (auto& s : store_->load_sessions(landscape_)) {
            session_counter_ = std::max<std::uint64_t>(session_counter_, id_number(s.id));
            if (s.in_flight) {
                const auto& at = std::get<AtExecution>(s.linkage);
                const auto* v = landscape_.registry.find_variant(at.exe.variant_id());
                resume.push_back(RunJob{*s.in_flight, s.id, at.leaf, at.exe, *v});
            }
            auto e = std::make_unique<Entry>();
            e->session = std::move(s);
            auto id = e->session.id;
            sessions_.emplace(std::move(id), std::move(e));
        }
    }
    for (std::size_t i = 0; i < cfg_.workers; ++i) workers_.emplace_back([this] { worker_loop(); });
    for (auto& job : resume) enqueue(std::move(job));
}

SessionService::~SessionService() {
    {
        std::lock_guard lk(queue_mutex_);
        stopping_ = true;
    }
    queue_cv_.notify_all();
    for (auto& t : workers_) t.join();
}

std::string SessionService::create_session() {
    auto id = fmt::format("s-{:06d}", ++session_counter_);
    auto e = std::make_unique<Entry>();
    e->session = new_session(id, landscape_.hierarchy);
    if (store_) store_->save(e->session, 0);
    std::lock_guard lk(sessions_mutex_);
    sessions_.emplace(id, std::move(e));
    return id;
}

SessionService::Entry& SessionService::entry(const std::string& id) const {
    std::lock_guard lk(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFound(fmt::format("no session '{}'", id));
    return *it->second;
}

std::string SessionService::next_run_id() { return fmt::format("r-{:06d}", ++run_counter_); }

void SessionService::store_run(const RunRecord& r) {
    if (store_) store_->save_run(r);
    std::lock_guard lk(runs_mutex_);
    runs_[r.run_id] = r;
}

PostReply SessionService::post_message(const std::string& session_id, const std::string& text) {
    Entry& e = entry(session_id);
    std::unique_lock lk(e.mutex, std::try_to_lock);
    if (!lk.owns_lock()) throw Busy(fmt::format("session '{}' is processing another message", session_id));
    Session& s = e.session;
    if (s.in_flight) throw Busy(fmt::format("session '{}' is waiting for run '{}'", session_id, *s.in_flight));

    std::size_t from = s.log.size();
    auto backend = make_backend(cfg_);
    Session before = s;
    PostResult posted;
    try {
        posted = dialogue_.post(s, text, *backend, [this] { return next_run_id(); });
    } catch (...) {
        s = std::move(before);
        throw;
    }
    std::optional<RunJob> background;
    if (posted.job) {
        if (largest_matrix_side(posted.job->exe) <= cfg_.sync_max_side) {
            auto outcome = run_job(*posted.job, cfg_.execution);
            store_run(finished_run(*posted.job, outcome));
            auto tail = dialogue_.complete(s, *posted.job, outcome);
            posted.events.insert(posted.events.end(), tail.begin(), tail.end());
        } else {
            store_run(pending_run(*posted.job));
            posted.events.push_back(dialogue_.mark_pending(s, *posted.job));
            background = std::move(posted.job);
        }
    }
    if (store_) store_->save(s, from);
    PostReply reply{std::move(posted.events), s.linkage};
    lk.unlock();
    if (background) enqueue(std::move(*background));
    return reply;
}

Session SessionService::snapshot(const std::string& session_id) const {
    Entry& e = entry(session_id);
    std::lock_guard lk(e.mutex);
    return e.session;
}

RunRecord SessionService::get_run(const std::string& run_id) const {
    std::lock_guard lk(runs_mutex_);
    auto it = runs_.find(run_id);
    if (it == runs_.end()) throw NotFound(fmt::format("no run '{}'", run_id));
    return it->second;
}

std::vector<std::string> SessionService::session_ids() const {
    std::lock_guard lk(sessions_mutex_);
    std::vector<std::string> out;
    for (const auto& [id, e] : sessions_) out.push_back(id);
    return out;
}

void SessionService::enqueue(RunJob job) {
    {
        std::lock_guard lk(queue_mutex_);
        queue_.push_back(std::move(job));
    }
    queue_cv_.notify_one();
}

void SessionService::worker_loop() {
    for (;;) {
        std::optional<RunJob> job;
        {
            std::unique_lock lk(queue_mutex_);
            queue_cv_.wait(lk, [this] { return stopping_ || !queue_.empty(); });
            if (stopping_) return;
            job.emplace(std::move(queue_.front()));
            queue_.pop_front();
            ++active_;
        }
        finish(*job, run_job(*job, cfg_.execution));
        {
            std::lock_guard lk(queue_mutex_);
            --active_;
        }
        idle_cv_.notify_all();
    }
}

void SessionService::finish(const RunJob& job, const RunOutcome& outcome) {
    Entry& e = entry(job.session_id);
    std::lock_guard lk(e.mutex);
    store_run(finished_run(job, outcome));
    std::size_t from = e.session.log.size();
    dialogue_.complete(e.session, job, outcome);
    if (store_) store_->save(e.session, from);
}

void SessionService::wait_idle() {
    std::unique_lock lk(queue_mutex_);
    idle_cv_.wait(lk, [this] { return queue_.empty() && active_ == 0; });
}

}  // namespace langsim::service
