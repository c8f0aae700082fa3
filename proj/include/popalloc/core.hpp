#pragma once

// Core bandwidth-allocation arithmetic for broadcast video sessions sharing
// one wireless link:
//   - viewer-count ranking with deterministic tie-breaking
//   - the equally-shared baseline split
//   - the popularity-weighted split with capped redistribution
//   - capacity head-count bounds (full quality / minimum quality)
//
// All functions are pure; values are freely copyable across threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "popalloc/errors.hpp"

namespace popalloc {

// Link capacity plus the uniform per-session bandwidth limits, all in kbps.
struct SystemConfig {
    double capacity_kbps = 0.0;
    double beta_max_kbps = 0.0;           // full-quality demand per session
    double beta_min_kbps = 0.0;           // minimum acceptable quality
    double layer_granularity_kbps = 0.0;  // enhancement-layer size, plan_layers only

    void validate() const {
        const bool finite = std::isfinite(capacity_kbps) && std::isfinite(beta_max_kbps) &&
                            std::isfinite(beta_min_kbps) && std::isfinite(layer_granularity_kbps);
        if (!finite)
            throw InvalidConfig("config: all values must be finite");
        if (capacity_kbps < 0.0)
            throw InvalidConfig("config: capacity_kbps must be >= 0");
        if (beta_max_kbps <= 0.0 || beta_min_kbps <= 0.0)
            throw InvalidConfig("config: beta limits must be > 0");
        if (layer_granularity_kbps <= 0.0)
            throw InvalidConfig("config: layer_granularity_kbps must be > 0");
        if (beta_min_kbps > beta_max_kbps)
            throw InvalidConfig("config: beta_min_kbps must not exceed beta_max_kbps");
        if (beta_max_kbps > capacity_kbps)
            throw InvalidConfig("config: beta_max_kbps must not exceed capacity_kbps");
    }
};

// One broadcast session and how many users currently watch it.
struct SessionSnapshot {
    std::string session_id;
    std::int64_t viewers = 0;
};

struct RankedEntry {
    int rank = 0;  // 1-based, rank 1 = most watched
    std::string session_id;
    std::int64_t viewers = 0;
};

// Sessions sorted by descending viewer count; ties broken by ascending id so
// that the ranking is a deterministic function of the snapshot set.
struct RankedSessions {
    std::vector<RankedEntry> entries;
    std::int64_t total_viewers = 0;
    int session_count = 0;
};

enum class Scheme {
    EqualShare,
    Popularity,
};

struct AllocationEntry {
    int rank = 0;
    std::string session_id;
    double beta_kbps = 0.0;
};

// Audit trail of the popularity split: the per-viewer bandwidth weight, the
// cap headroom, and the per-rank redistribution terms.
struct AllocationIntermediates {
    double a = 0.0;               // (M/K) * (C/M - beta_min)
    double beta_diff_kbps = 0.0;  // beta_max - beta_min
    std::vector<double> x_terms;  // excess passed down by each rank; last is always 0
    bool last_rank_clamped = false;  // rounding-noise cap at the last rank (see below)
};

struct Allocation {
    std::vector<AllocationEntry> per_session;
    Scheme scheme = Scheme::Popularity;
    std::optional<AllocationIntermediates> intermediates;
};

// How many sessions fit at full quality (n_hq) and at minimum quality (n_lq);
// n_lq is the admission ceiling.
struct CapacityBounds {
    std::int64_t n_hq = 0;
    std::int64_t n_lq = 0;
};

namespace detail {

// floor(num/den), via exact integer division when both operands are integral
// kbps so 0.999... double quotients cannot shift the result.
inline std::int64_t floor_div(double num, double den) {
    if (num == std::floor(num) && den == std::floor(den) &&
        std::abs(num) < 9.0e15 && std::abs(den) < 9.0e15) {
        return static_cast<std::int64_t>(num) / static_cast<std::int64_t>(den);
    }
    return static_cast<std::int64_t>(std::floor(num / den));
}

}  // namespace detail

inline RankedSessions rank_sessions(std::vector<SessionSnapshot> snapshots) {
    {
        std::unordered_set<std::string> seen;
        seen.reserve(snapshots.size());
        for (const auto& snap : snapshots) {
            if (!seen.insert(snap.session_id).second)
                throw DuplicateSessionId("duplicate session id: " + snap.session_id);
        }
    }
    std::sort(snapshots.begin(), snapshots.end(), [](const SessionSnapshot& a, const SessionSnapshot& b) {
        if (a.viewers != b.viewers) return a.viewers > b.viewers;
        return a.session_id < b.session_id;
    });
    RankedSessions ranked;
    ranked.entries.reserve(snapshots.size());
    for (auto& snap : snapshots) {
        ranked.total_viewers += snap.viewers;
        ranked.entries.push_back({static_cast<int>(ranked.entries.size()) + 1,
                                  std::move(snap.session_id), snap.viewers});
    }
    ranked.session_count = static_cast<int>(ranked.entries.size());
    return ranked;
}

// Baseline: capacity split evenly over the active sessions, capped at beta_max.
// Returns the single per-session bandwidth.
inline double equal_share_allocate(const SystemConfig& config, int session_count) {
    config.validate();
    if (session_count < 1)
        throw std::invalid_argument("equal_share_allocate: session_count must be >= 1");
    if (config.beta_min_kbps * session_count > config.capacity_kbps)
        throw OverCapacity("equal_share_allocate: " + std::to_string(session_count) +
                           " sessions exceed capacity at beta_min");
    if (config.beta_max_kbps * session_count <= config.capacity_kbps)
        return config.beta_max_kbps;
    return config.capacity_kbps / session_count;
}

// Popularity-weighted split. Each session gets beta_min plus a share of the
// leftover capacity proportional to its viewer count; whenever that share
// overshoots beta_max the excess is passed down, split evenly over all lower
// ranks. Comparisons against the cap headroom are exact (no epsilon): at the
// boundary both branches agree.
inline Allocation popularity_allocate(const SystemConfig& config, const RankedSessions& ranked) {
    config.validate();
    const int session_count = ranked.session_count;
    if (session_count < 1)
        throw std::invalid_argument("popularity_allocate: at least one session required");
    const double capacity = config.capacity_kbps;
    const double beta_max = config.beta_max_kbps;
    const double beta_min = config.beta_min_kbps;
    if (beta_min * session_count > capacity)
        throw OverCapacity("popularity_allocate: " + std::to_string(session_count) +
                           " sessions exceed capacity at beta_min");

    Allocation alloc;
    alloc.scheme = Scheme::Popularity;
    AllocationIntermediates inter;
    inter.beta_diff_kbps = beta_max - beta_min;
    inter.x_terms.assign(static_cast<std::size_t>(session_count), 0.0);

    const std::int64_t total_viewers = ranked.total_viewers;
    alloc.per_session.reserve(static_cast<std::size_t>(session_count));
    auto emit = [&](int index, double beta) {
        const auto& entry = ranked.entries[static_cast<std::size_t>(index)];
        alloc.per_session.push_back({entry.rank, entry.session_id, beta});
    };

    if (beta_max * session_count <= capacity) {
        // Enough capacity for everyone's ceiling.
        if (total_viewers > 0)
            inter.a = (static_cast<double>(session_count) / static_cast<double>(total_viewers)) *
                      (capacity / session_count - beta_min);
        for (int i = 0; i < session_count; ++i) emit(i, beta_max);
    } else if (total_viewers == 0) {
        // Nobody watching anything: treat all sessions as equally popular,
        // matching the all-counts-equal limit of the weighted split.
        const double even = std::min(beta_max, capacity / session_count);
        for (int i = 0; i < session_count; ++i) emit(i, even);
    } else {
        inter.a = (static_cast<double>(session_count) / static_cast<double>(total_viewers)) *
                  (capacity / session_count - beta_min);
        double redistributed = 0.0;  // sum of x_terms emitted by higher ranks
        for (int i = 0; i < session_count; ++i) {
            const double share =
                inter.a * static_cast<double>(ranked.entries[static_cast<std::size_t>(i)].viewers) +
                redistributed;
            if (share >= inter.beta_diff_kbps) {
                emit(i, beta_max);
                if (i + 1 < session_count) {
                    inter.x_terms[static_cast<std::size_t>(i)] =
                        (share - inter.beta_diff_kbps) / static_cast<double>(session_count - (i + 1));
                    redistributed += inter.x_terms[static_cast<std::size_t>(i)];
                } else {
                    // Exact arithmetic cannot cap the last rank when the link is
                    // oversubscribed; reaching here is rounding noise. Clamp and
                    // flag instead of dividing by the zero remaining-rank count.
                    inter.last_rank_clamped = true;
                }
            } else {
                emit(i, beta_min + share);
            }
        }
    }
    alloc.intermediates = std::move(inter);
    return alloc;
}

inline CapacityBounds capacity_limits(const SystemConfig& config) {
    config.validate();
    return {detail::floor_div(config.capacity_kbps, config.beta_max_kbps),
            detail::floor_div(config.capacity_kbps, config.beta_min_kbps)};
}

// Bandwidth gap between a rank and the next one down. Always >= 0.
inline double allocation_delta(const Allocation& alloc, int rank) {
    if (alloc.scheme != Scheme::Popularity)
        throw std::invalid_argument("allocation_delta: popularity allocation required");
    const int session_count = static_cast<int>(alloc.per_session.size());
    if (rank < 1 || rank >= session_count)
        throw RankOutOfRange("allocation_delta: rank " + std::to_string(rank) +
                             " not in [1, " + std::to_string(session_count) + ")");
    return alloc.per_session[static_cast<std::size_t>(rank - 1)].beta_kbps -
           alloc.per_session[static_cast<std::size_t>(rank)].beta_kbps;
}

}  // namespace popalloc
