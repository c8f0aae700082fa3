#pragma once

// Command implementations behind the CLI: config-file handling, the four
// subcommands (allocate, sweep, replay, limits) and sweep aggregation. Kept
// stream-based so they are testable without spawning processes.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "popalloc/core.hpp"
#include "popalloc/csv.hpp"
#include "popalloc/errors.hpp"
#include "popalloc/layering.hpp"
#include "popalloc/metrics.hpp"
#include "popalloc/sim.hpp"

namespace popalloc::cli {

// Values read from a flat "key = value" config file. Command-line flags
// override these; these override the built-in defaults.
struct FileConfig {
    std::optional<double> capacity_kbps;
    std::optional<double> beta_max_kbps;
    std::optional<double> beta_min_kbps;
    std::optional<double> layer_granularity_kbps;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

inline double parse_config_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double parsed = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
        throw InvalidConfig("config: invalid value for " + key + ": '" + value + "'");
    return parsed;
}

inline std::uint64_t parse_config_u64(const std::string& key, const std::string& value) {
    std::uint64_t parsed = 0;
    const char* begin = value.c_str();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, parsed);
    if (ec != std::errc{} || ptr != end)
        throw InvalidConfig("config: invalid value for " + key + ": '" + value + "'");
    return parsed;
}

}  // namespace detail

inline FileConfig parse_config_file(std::istream& in) {
    FileConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string content = detail::trim(line);
        if (content.empty() || content[0] == '#') continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(content.substr(0, eq));
        const std::string value = detail::trim(content.substr(eq + 1));
        if (key == "capacity_kbps")
            config.capacity_kbps = detail::parse_config_double(key, value);
        else if (key == "beta_max_kbps")
            config.beta_max_kbps = detail::parse_config_double(key, value);
        else if (key == "beta_min_kbps")
            config.beta_min_kbps = detail::parse_config_double(key, value);
        else if (key == "layer_granularity_kbps")
            config.layer_granularity_kbps = detail::parse_config_double(key, value);
        else if (key == "seed")
            config.seed = detail::parse_config_u64(key, value);
        else if (key == "trials") {
            const std::uint64_t trials = detail::parse_config_u64(key, value);
            if (trials < 1 || trials > 1000000)
                throw InvalidConfig("config: trials out of range: " + value);
            config.trials = static_cast<int>(trials);
        } else {
            throw InvalidConfig("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return config;
}

inline void run_limits(const SystemConfig& config, std::ostream& out) {
    const CapacityBounds bounds = capacity_limits(config);
    out << "n_hq," << bounds.n_hq << "\n";
    out << "n_lq," << bounds.n_lq << "\n";
}

// Per-session allocation table for both schemes plus a summary block
// (comment lines) with the averages and the quality-shift counts.
inline void run_allocate(const SystemConfig& config, std::istream& snapshot_csv, std::ostream& out) {
    auto snapshots = csv::read_snapshots(snapshot_csv);
    if (snapshots.empty())
        throw DataError("snapshot contains no sessions");
    const RankedSessions ranked = rank_sessions(std::move(snapshots));
    const Allocation alloc = popularity_allocate(config, ranked);
    const SatisfactionReport report = satisfaction_report(config, alloc, ranked);
    const QualityShiftReport shift = quality_shift(config, alloc, ranked);
    const double beta_equal = equal_share_allocate(config, ranked.session_count);

    out << "rank,session_id,viewers,beta_kbps,beta_equal_kbps,s_level,"
           "layers_base_kbps,layers_count,layers_residual_kbps\n";
    for (std::size_t i = 0; i < alloc.per_session.size(); ++i) {
        const auto& entry = alloc.per_session[i];
        const LayerPlan plan = plan_layers(entry.beta_kbps, config);
        out << entry.rank << ',' << entry.session_id << ',' << ranked.entries[i].viewers << ','
            << csv::format_kbps(entry.beta_kbps) << ',' << csv::format_kbps(beta_equal) << ','
            << csv::format_satisfaction(report.per_session[i].s_level) << ','
            << csv::format_kbps(plan.base_kbps) << ',' << plan.enhancement_count << ','
            << csv::format_kbps(plan.residual_kbps) << "\n";
    }
    out << "# avg_sat_proposed," << csv::format_satisfaction(report.average) << "\n";
    out << "# avg_sat_equal," << csv::format_satisfaction(report.baseline_equal_share) << "\n";
    out << "# users_improved," << shift.users_improved << "\n";
    out << "# users_degraded," << shift.users_degraded << "\n";
    out << "# users_unchanged," << shift.users_unchanged << "\n";
}

// Mean over trials for one session count. User counts become real-valued.
struct AggregateRecord {
    int session_count = 0;
    double avg_sat_proposed = 0.0;
    double avg_sat_equal = 0.0;
    double users_improved = 0.0;
    double users_degraded = 0.0;
    double users_unchanged = 0.0;
    double beta_rank1_kbps = 0.0;
    double beta_rankM_kbps = 0.0;
    double beta_equal_kbps = 0.0;
};

inline std::vector<AggregateRecord> aggregate_records(const std::vector<SweepRecord>& records) {
    std::vector<AggregateRecord> aggregates;
    std::size_t i = 0;
    while (i < records.size()) {
        const int session_count = records[i].session_count;
        AggregateRecord agg;
        agg.session_count = session_count;
        std::size_t n = 0;
        for (; i < records.size() && records[i].session_count == session_count; ++i, ++n) {
            const SweepRecord& r = records[i];
            agg.avg_sat_proposed += r.avg_sat_proposed;
            agg.avg_sat_equal += r.avg_sat_equal;
            agg.users_improved += static_cast<double>(r.users_improved);
            agg.users_degraded += static_cast<double>(r.users_degraded);
            agg.users_unchanged += static_cast<double>(r.users_unchanged);
            agg.beta_rank1_kbps += r.beta_rank1_kbps;
            agg.beta_rankM_kbps += r.beta_rankM_kbps;
            agg.beta_equal_kbps += r.beta_equal_kbps;
        }
        const auto divisor = static_cast<double>(n);
        agg.avg_sat_proposed /= divisor;
        agg.avg_sat_equal /= divisor;
        agg.users_improved /= divisor;
        agg.users_degraded /= divisor;
        agg.users_unchanged /= divisor;
        agg.beta_rank1_kbps /= divisor;
        agg.beta_rankM_kbps /= divisor;
        agg.beta_equal_kbps /= divisor;
        aggregates.push_back(agg);
    }
    return aggregates;
}

inline void write_sweep_trials(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "M,trial,avg_sat_proposed,avg_sat_equal,users_improved,users_degraded,"
           "users_unchanged,beta_rank1_kbps,beta_rankM_kbps,beta_equal_kbps\n";
    for (const SweepRecord& r : records) {
        out << r.session_count << ',' << r.trial << ',' << csv::format_satisfaction(r.avg_sat_proposed)
            << ',' << csv::format_satisfaction(r.avg_sat_equal) << ',' << r.users_improved << ','
            << r.users_degraded << ',' << r.users_unchanged << ',' << csv::format_kbps(r.beta_rank1_kbps)
            << ',' << csv::format_kbps(r.beta_rankM_kbps) << ',' << csv::format_kbps(r.beta_equal_kbps)
            << "\n";
    }
}

inline void write_sweep_aggregate(std::ostream& out, const std::vector<AggregateRecord>& aggregates) {
    out << "M,avg_sat_proposed,avg_sat_equal,users_improved,users_degraded,"
           "users_unchanged,beta_rank1_kbps,beta_rankM_kbps,beta_equal_kbps\n";
    for (const AggregateRecord& a : aggregates) {
        out << a.session_count << ',' << csv::format_satisfaction(a.avg_sat_proposed) << ','
            << csv::format_satisfaction(a.avg_sat_equal) << ',' << csv::format_kbps(a.users_improved)
            << ',' << csv::format_kbps(a.users_degraded) << ',' << csv::format_kbps(a.users_unchanged)
            << ',' << csv::format_kbps(a.beta_rank1_kbps) << ',' << csv::format_kbps(a.beta_rankM_kbps)
            << ',' << csv::format_kbps(a.beta_equal_kbps) << "\n";
    }
}

// Per-trial records to trial_out, per-M means to agg_out. When both land on
// the same stream a single blank line separates the tables.
inline void run_sweep(const SystemConfig& config, const SweepParams& params, std::ostream& trial_out,
                      std::ostream& agg_out, bool blank_line_between) {
    const std::vector<SweepRecord> records = sweep(config, params);
    write_sweep_trials(trial_out, records);
    if (blank_line_between) agg_out << "\n";
    write_sweep_aggregate(agg_out, aggregate_records(records));
}

inline const char* event_name(EventKind kind) {
    switch (kind) {
        case EventKind::SessionStart: return "start";
        case EventKind::SessionEnd: return "end";
        case EventKind::ViewerJoin: return "join";
        case EventKind::ViewerLeave: return "leave";
    }
    return "?";
}

// Timeline: one row per active session per event; events that leave the
// system empty emit a single row with blank allocation columns.
inline void run_replay(const SystemConfig& config, std::istream& trace_csv, std::ostream& out) {
    const EventTrace trace = csv::read_trace(trace_csv);
    const std::vector<ReplayStep> steps = replay(config, trace);
    out << "timestamp,event,session_id,outcome,rank,active_session_id,viewers,"
           "beta_kbps,layers_base_kbps,layers_count,layers_residual_kbps\n";
    for (const ReplayStep& step : steps) {
        const std::string prefix = csv::format_kbps(step.event.timestamp) + ',' +
                                   event_name(step.event.kind) + ',' + step.event.session_id + ',' +
                                   (step.outcome == EventOutcome::Applied ? "applied" : "rejected");
        if (step.allocation.per_session.empty()) {
            out << prefix << ",,,,,,,\n";
            continue;
        }
        for (std::size_t i = 0; i < step.allocation.per_session.size(); ++i) {
            const auto& entry = step.allocation.per_session[i];
            const LayerPlan& plan = step.plans[i];
            out << prefix << ',' << entry.rank << ',' << entry.session_id << ','
                << step.ranked.entries[i].viewers << ',' << csv::format_kbps(entry.beta_kbps) << ','
                << csv::format_kbps(plan.base_kbps) << ',' << plan.enhancement_count << ','
                << csv::format_kbps(plan.residual_kbps) << "\n";
        }
    }
}

}  // namespace popalloc::cli
