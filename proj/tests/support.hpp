#pragma once

// Shared test plumbing: randomized instance generation for property tests and
// a helper that runs the real CLI binary.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "popalloc/core.hpp"
#include "popalloc/rng.hpp"

namespace testsupport {

// One randomized allocation problem: integer parameters, viewer counts in
// rank order. Grid: M in [1,64], K in [1,1000], beta_min in [1,50],
// beta_max = beta_min + [0,100], C in [max(beta_max, M*beta_min), M*beta_max + beta_max].
struct Instance {
    popalloc::SystemConfig config;
    std::vector<std::int64_t> counts;  // descending
    std::int64_t capacity = 0;
    std::int64_t beta_max = 0;
    std::int64_t beta_min = 0;
};

inline Instance random_instance(popalloc::SplitMix64& rng) {
    const int session_count = 1 + static_cast<int>(popalloc::uniform_below(rng, 64));
    const auto beta_min = static_cast<std::int64_t>(1 + popalloc::uniform_below(rng, 50));
    const auto beta_max = beta_min + static_cast<std::int64_t>(popalloc::uniform_below(rng, 101));
    const std::int64_t c_low = std::max(beta_max, beta_min * session_count);
    const std::int64_t c_high = beta_max * session_count + beta_max;
    const auto capacity =
        c_low + static_cast<std::int64_t>(popalloc::uniform_below(
                    rng, static_cast<std::uint64_t>(c_high - c_low + 1)));
    const auto users = static_cast<std::int64_t>(1 + popalloc::uniform_below(rng, 1000));

    Instance inst;
    inst.capacity = capacity;
    inst.beta_max = beta_max;
    inst.beta_min = beta_min;
    inst.counts.assign(static_cast<std::size_t>(session_count), 0);
    for (std::int64_t u = 0; u < users; ++u)
        ++inst.counts[static_cast<std::size_t>(
            popalloc::uniform_below(rng, static_cast<std::uint64_t>(session_count)))];
    std::sort(inst.counts.begin(), inst.counts.end(), std::greater<>());
    inst.config = {static_cast<double>(capacity), static_cast<double>(beta_max),
                   static_cast<double>(beta_min), 100.0};
    return inst;
}

// Small-parameter grid for oracle comparison: M in [1,6], per-session counts
// in [0,20] (at least one viewer), beta_min in [1,20], beta_max = beta_min + [0,20].
inline Instance random_small_instance(popalloc::SplitMix64& rng) {
    const int session_count = 1 + static_cast<int>(popalloc::uniform_below(rng, 6));
    const auto beta_min = static_cast<std::int64_t>(1 + popalloc::uniform_below(rng, 20));
    const auto beta_max = beta_min + static_cast<std::int64_t>(popalloc::uniform_below(rng, 21));
    const std::int64_t c_low = std::max(beta_max, beta_min * session_count);
    const std::int64_t c_high = beta_max * session_count + 10;
    const auto capacity =
        c_low + static_cast<std::int64_t>(popalloc::uniform_below(
                    rng, static_cast<std::uint64_t>(c_high - c_low + 1)));

    Instance inst;
    inst.capacity = capacity;
    inst.beta_max = beta_max;
    inst.beta_min = beta_min;
    for (;;) {
        inst.counts.clear();
        std::int64_t total = 0;
        for (int m = 0; m < session_count; ++m) {
            const auto c = static_cast<std::int64_t>(popalloc::uniform_below(rng, 21));
            inst.counts.push_back(c);
            total += c;
        }
        if (total >= 1) break;
    }
    std::sort(inst.counts.begin(), inst.counts.end(), std::greater<>());
    inst.config = {static_cast<double>(capacity), static_cast<double>(beta_max),
                   static_cast<double>(beta_min), 100.0};
    return inst;
}

inline popalloc::RankedSessions make_ranked(const std::vector<std::int64_t>& counts_desc) {
    std::vector<popalloc::SessionSnapshot> snapshots;
    snapshots.reserve(counts_desc.size());
    char id[32];
    for (std::size_t i = 0; i < counts_desc.size(); ++i) {
        std::snprintf(id, sizeof id, "s%03zu", i + 1);
        snapshots.push_back({id, counts_desc[i]});
    }
    return popalloc::rank_sessions(std::move(snapshots));
}

// ---------------------------------------------------------------------------
// Running the installed CLI binary
// ---------------------------------------------------------------------------

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::filesystem::path temp_path(const std::string& stem) {
    static int counter = 0;
    return std::filesystem::temp_directory_path() /
           (stem + "." + std::to_string(::getpid()) + "." + std::to_string(counter++));
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline CliResult run_cli(const std::vector<std::string>& args) {
    const auto err_path = temp_path("popalloc_stderr");
    std::string command = POPALLOC_CLI_PATH;
    for (const std::string& arg : args) command += " '" + arg + "'";
    command += " 2>" + err_path.string();

    CliResult result;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr) return result;
    char buffer[4096];
    std::size_t n = 0;
    while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, n);
    const int status = ::pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    result.err = read_file(err_path);
    std::filesystem::remove(err_path);
    return result;
}

// Splits CSV text into non-empty lines (keeps comment lines).
inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        if (end > start) lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace testsupport
