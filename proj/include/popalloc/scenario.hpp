#pragma once

// Seeded synthesis of viewer-count distributions.
//
// Scenario 1: every user picks one of the M sessions uniformly at random.
// Scenario 2: session 1 is anchored with half the audience (floor(K/2)); the
//             remaining users pick uniformly among the other M-1 sessions.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "popalloc/core.hpp"
#include "popalloc/errors.hpp"
#include "popalloc/rng.hpp"

namespace popalloc {

enum class ScenarioKind {
    Scenario1 = 1,
    Scenario2 = 2,
};

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::Scenario1;
    std::int64_t total_users = 0;
    int session_count = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (total_users < 1)
            throw InvalidSpec("scenario: total_users must be >= 1");
        if (session_count < 1)
            throw InvalidSpec("scenario: session_count must be >= 1");
        if (kind == ScenarioKind::Scenario2 && session_count < 2)
            throw InvalidSpec("scenario 2 needs at least two sessions");
    }
};

// s001, s002, ... (width grows past s999).
inline std::string scenario_session_id(int one_based_index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%03d", one_based_index);
    return buf;
}

inline std::vector<SessionSnapshot> generate(const ScenarioSpec& spec) {
    spec.validate();
    const auto bins = static_cast<std::uint64_t>(spec.session_count);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.session_count), 0);
    SplitMix64 rng(spec.seed);
    if (spec.kind == ScenarioKind::Scenario1) {
        for (std::int64_t u = 0; u < spec.total_users; ++u)
            ++counts[static_cast<std::size_t>(uniform_below(rng, bins))];
    } else {
        const std::int64_t anchored = spec.total_users / 2;
        counts[0] = anchored;
        for (std::int64_t u = anchored; u < spec.total_users; ++u)
            ++counts[1 + static_cast<std::size_t>(uniform_below(rng, bins - 1))];
    }
    std::vector<SessionSnapshot> snapshots;
    snapshots.reserve(counts.size());
    for (int i = 0; i < spec.session_count; ++i)
        snapshots.push_back({scenario_session_id(i + 1), counts[static_cast<std::size_t>(i)]});
    return snapshots;
}

}  // namespace popalloc
