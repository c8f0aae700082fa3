#pragma once

// Deterministic randomness. SplitMix64 has fixed constants and no
// platform-dependent state, so every seed reproduces the same stream on every
// build. Parallel work derives one stream per (session-count, trial) pair and
// is therefore independent of scheduling order.

#include <cassert>
#include <cstdint>

namespace popalloc {

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// Unbiased draw in [0, n) by rejection sampling.
inline std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t n) {
    assert(n >= 1);
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t r = rng.next();
        if (r >= threshold) return r % n;
    }
}

// Stream seed for one (session_count, trial) cell:
//   h0 = mix(master); h1 = mix(h0 ^ session_count); seed = mix(h1 ^ trial).
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t session_count,
                                        std::uint64_t trial) {
    SplitMix64 g(master_seed);
    g.state = g.next() ^ session_count;
    g.state = g.next() ^ trial;
    return g.next();
}

}  // namespace popalloc
