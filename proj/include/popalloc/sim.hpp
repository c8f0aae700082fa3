#pragma once

// Experiment drivers.
//
// sweep: for each session count M in a range and each trial, draw a fresh
// viewer distribution, run both allocation schemes on the same snapshot and
// record the paired results. Trials run from per-(M, trial) derived seeds, so
// parallel execution cannot change any record.
//
// replay: walk a timestamped session/viewer event trace, recomputing ranking,
// allocation and layer plans after every event. Session starts past the
// admission ceiling are rejected and leave the state untouched.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "popalloc/core.hpp"
#include "popalloc/errors.hpp"
#include "popalloc/layering.hpp"
#include "popalloc/metrics.hpp"
#include "popalloc/rng.hpp"
#include "popalloc/scenario.hpp"

namespace popalloc {

struct SweepRecord {
    int session_count = 0;  // M
    int trial = 0;          // 0-based
    double avg_sat_proposed = 0.0;
    double avg_sat_equal = 0.0;
    std::int64_t users_improved = 0;
    std::int64_t users_degraded = 0;
    std::int64_t users_unchanged = 0;
    double beta_rank1_kbps = 0.0;
    double beta_rankM_kbps = 0.0;
    double beta_equal_kbps = 0.0;
};

struct SweepParams {
    ScenarioKind kind = ScenarioKind::Scenario1;
    int m_from = 1;
    int m_to = 1;  // inclusive
    int trials = 1;
    std::int64_t total_users = 200;
    std::uint64_t seed = 42;
    unsigned threads = 1;
};

namespace detail {

inline SweepRecord run_trial(const SystemConfig& config, const SweepParams& params, int session_count,
                             int trial) {
    ScenarioSpec spec{params.kind, params.total_users, session_count,
                      derive_stream_seed(params.seed, static_cast<std::uint64_t>(session_count),
                                         static_cast<std::uint64_t>(trial))};
    const RankedSessions ranked = rank_sessions(generate(spec));
    const Allocation alloc = popularity_allocate(config, ranked);
    const SatisfactionReport report = satisfaction_report(config, alloc, ranked);
    const QualityShiftReport shift = quality_shift(config, alloc, ranked);
    SweepRecord record;
    record.session_count = session_count;
    record.trial = trial;
    record.avg_sat_proposed = report.average;
    record.avg_sat_equal = report.baseline_equal_share;
    record.users_improved = shift.users_improved;
    record.users_degraded = shift.users_degraded;
    record.users_unchanged = shift.users_unchanged;
    record.beta_rank1_kbps = alloc.per_session.front().beta_kbps;
    record.beta_rankM_kbps = alloc.per_session.back().beta_kbps;
    record.beta_equal_kbps = equal_share_allocate(config, session_count);
    return record;
}

}  // namespace detail

// Records come back ordered by (M, trial) regardless of thread count.
inline std::vector<SweepRecord> sweep(const SystemConfig& config, const SweepParams& params) {
    config.validate();
    if (params.m_from < 1 || params.m_to < params.m_from)
        throw std::invalid_argument("sweep: invalid session-count range");
    if (params.trials < 1)
        throw std::invalid_argument("sweep: trials must be >= 1");
    const CapacityBounds bounds = capacity_limits(config);
    if (params.m_to > bounds.n_lq)
        throw OverCapacity("sweep: session count " + std::to_string(params.m_to) +
                           " exceeds the admission ceiling n_lq=" + std::to_string(bounds.n_lq));
    // Catch unsatisfiable scenario specs before any worker thread starts.
    ScenarioSpec{params.kind, params.total_users, params.m_from, 0}.validate();

    const std::size_t total =
        static_cast<std::size_t>(params.m_to - params.m_from + 1) * static_cast<std::size_t>(params.trials);
    std::vector<SweepRecord> records(total);
    auto fill = [&](std::size_t i) {
        const int session_count = params.m_from + static_cast<int>(i / static_cast<std::size_t>(params.trials));
        const int trial = static_cast<int>(i % static_cast<std::size_t>(params.trials));
        records[i] = detail::run_trial(config, params, session_count, trial);
    };

    const unsigned workers = params.threads > 1 ? params.threads : 1;
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) fill(i);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        auto work = [&] {
            try {
                for (std::size_t i; (i = cursor.fetch_add(1)) < total;) fill(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        if (failed.load()) std::rethrow_exception(failure);
    }
    return records;
}

enum class EventKind {
    SessionStart,
    SessionEnd,
    ViewerJoin,
    ViewerLeave,
};

struct TraceEvent {
    double timestamp = 0.0;  // seconds, non-decreasing
    EventKind kind = EventKind::SessionStart;
    std::string session_id;
};

struct EventTrace {
    std::vector<TraceEvent> events;
};

enum class EventOutcome {
    Applied,
    Rejected,  // SessionStart past the admission ceiling
};

struct ReplayStep {
    TraceEvent event;
    EventOutcome outcome = EventOutcome::Applied;
    RankedSessions ranked;            // state after the event
    Allocation allocation;            // empty per_session when nothing is active
    std::vector<LayerPlan> plans;     // parallel to allocation.per_session
};

inline std::vector<ReplayStep> replay(const SystemConfig& config, const EventTrace& trace) {
    config.validate();
    std::map<std::string, std::int64_t> active;  // session id -> viewers
    std::vector<ReplayStep> steps;
    steps.reserve(trace.events.size());
    double last_timestamp = 0.0;
    bool first = true;
    for (const auto& event : trace.events) {
        if (!std::isfinite(event.timestamp) || event.timestamp < 0.0)
            throw MalformedTrace("trace: timestamp must be a finite non-negative number");
        if (!first && event.timestamp < last_timestamp)
            throw MalformedTrace("trace: timestamps must be non-decreasing");
        first = false;
        last_timestamp = event.timestamp;

        EventOutcome outcome = EventOutcome::Applied;
        auto it = active.find(event.session_id);
        switch (event.kind) {
            case EventKind::SessionStart:
                if (it != active.end())
                    throw MalformedTrace("trace: session already active: " + event.session_id);
                if (config.beta_min_kbps * static_cast<double>(active.size() + 1) > config.capacity_kbps)
                    outcome = EventOutcome::Rejected;
                else
                    active.emplace(event.session_id, 0);
                break;
            case EventKind::SessionEnd:
                if (it == active.end())
                    throw MalformedTrace("trace: end of inactive session: " + event.session_id);
                active.erase(it);
                break;
            case EventKind::ViewerJoin:
                if (it == active.end())
                    throw MalformedTrace("trace: join before session start: " + event.session_id);
                ++it->second;
                break;
            case EventKind::ViewerLeave:
                if (it == active.end())
                    throw MalformedTrace("trace: leave before session start: " + event.session_id);
                if (it->second <= 0)
                    throw MalformedTrace("trace: leave with no viewers: " + event.session_id);
                --it->second;
                break;
        }

        ReplayStep step;
        step.event = event;
        step.outcome = outcome;
        if (!active.empty()) {
            std::vector<SessionSnapshot> snapshots;
            snapshots.reserve(active.size());
            for (const auto& [id, viewers] : active) snapshots.push_back({id, viewers});
            step.ranked = rank_sessions(std::move(snapshots));
            step.allocation = popularity_allocate(config, step.ranked);
            step.plans.reserve(step.allocation.per_session.size());
            for (const auto& entry : step.allocation.per_session)
                step.plans.push_back(plan_layers(entry.beta_kbps, config));
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

}  // namespace popalloc
