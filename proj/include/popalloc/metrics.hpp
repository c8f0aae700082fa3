#pragma once

// User-satisfaction metrics and scheme comparison. Satisfaction is linear in
// allocated bandwidth: 1.0 at beta_max, beta_min/beta_max at the floor.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "popalloc/core.hpp"
#include "popalloc/errors.hpp"

namespace popalloc {

struct SatisfactionEntry {
    int rank = 0;
    std::string session_id;
    double s_level = 0.0;  // in [beta_min/beta_max, 1]
};

struct SatisfactionReport {
    std::vector<SatisfactionEntry> per_session;
    double average = 0.0;              // viewer-weighted mean of s_level
    double baseline_equal_share = 0.0; // satisfaction under the equal split
    // True when no one is watching: the weighted mean is undefined, so the
    // average is reported as the baseline instead of erroring.
    bool empty_population = false;
};

// Per-user classification against the equal-share baseline.
struct QualityShiftReport {
    std::int64_t users_improved = 0;
    std::int64_t users_degraded = 0;
    std::int64_t users_unchanged = 0;
};

inline double equal_share_satisfaction(const SystemConfig& config, int session_count) {
    config.validate();
    if (session_count < 1)
        throw std::invalid_argument("equal_share_satisfaction: session_count must be >= 1");
    if (config.beta_min_kbps * session_count > config.capacity_kbps)
        throw OverCapacity("equal_share_satisfaction: " + std::to_string(session_count) +
                           " sessions exceed capacity at beta_min");
    if (config.beta_max_kbps * session_count <= config.capacity_kbps)
        return 1.0;
    return config.capacity_kbps / (config.beta_max_kbps * session_count);
}

inline SatisfactionReport satisfaction_report(const SystemConfig& config, const Allocation& alloc,
                                              const RankedSessions& ranked) {
    if (alloc.per_session.size() != ranked.entries.size())
        throw std::invalid_argument("satisfaction_report: allocation does not match ranking");
    const int session_count = ranked.session_count;
    SatisfactionReport report;
    report.baseline_equal_share = equal_share_satisfaction(config, session_count);
    const bool all_full_quality = config.beta_max_kbps * session_count <= config.capacity_kbps;
    report.per_session.reserve(alloc.per_session.size());
    double weighted = 0.0;
    for (std::size_t i = 0; i < alloc.per_session.size(); ++i) {
        const auto& entry = alloc.per_session[i];
        const double s_level =
            all_full_quality ? 1.0 : entry.beta_kbps / config.beta_max_kbps;
        report.per_session.push_back({entry.rank, entry.session_id, s_level});
        weighted += s_level * static_cast<double>(ranked.entries[i].viewers);
    }
    if (ranked.total_viewers > 0) {
        report.average = weighted / static_cast<double>(ranked.total_viewers);
    } else {
        report.average = report.baseline_equal_share;
        report.empty_population = true;
    }
    return report;
}

inline QualityShiftReport quality_shift(const SystemConfig& config, const Allocation& alloc,
                                        const RankedSessions& ranked) {
    if (alloc.per_session.size() != ranked.entries.size())
        throw std::invalid_argument("quality_shift: allocation does not match ranking");
    const double equal_beta = equal_share_allocate(config, ranked.session_count);
    // "unchanged" means equal after rounding both sides to 1e-9 kbps, so cap
    // and symmetry cases do not leak into either bucket through noise.
    auto quantize = [](double kbps) { return std::llround(kbps * 1e9); };
    const long long equal_q = quantize(equal_beta);
    QualityShiftReport report;
    for (std::size_t i = 0; i < alloc.per_session.size(); ++i) {
        const long long beta_q = quantize(alloc.per_session[i].beta_kbps);
        const std::int64_t viewers = ranked.entries[i].viewers;
        if (beta_q > equal_q)
            report.users_improved += viewers;
        else if (beta_q < equal_q)
            report.users_degraded += viewers;
        else
            report.users_unchanged += viewers;
    }
    return report;
}

}  // namespace popalloc
