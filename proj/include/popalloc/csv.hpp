#pragma once

// CSV ingestion and field formatting.
//
// Inputs are plain comma-separated files, UTF-8, no quoting; lines starting
// with '#' are comments. Numeric output fields use fixed decimal formatting
// (bandwidth 3 digits, satisfaction 6 digits, ties to even) so identical runs
// emit byte-identical files.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <string>
#include <vector>

#include "popalloc/core.hpp"
#include "popalloc/errors.hpp"
#include "popalloc/sim.hpp"

namespace popalloc::csv {

inline std::string format_fixed(double value, int digits) {
    if (value == 0.0) value = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

inline std::string format_kbps(double value) { return format_fixed(value, 3); }
inline std::string format_satisfaction(double value) { return format_fixed(value, 6); }

namespace detail {

inline void split_line(const std::string& line, std::vector<std::string>& fields) {
    fields.clear();
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Reads the next content line (skips blanks and '#' comments, strips '\r').
inline bool next_line(std::istream& in, std::string& line, int& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        return true;
    }
    return false;
}

inline std::int64_t parse_int(const std::string& field, int line_no, const char* what) {
    std::int64_t value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw DataError("line " + std::to_string(line_no) + ": invalid " + what + ": '" + field + "'");
    return value;
}

inline double parse_double(const std::string& field, int line_no, const char* what) {
    if (field.empty())
        throw DataError("line " + std::to_string(line_no) + ": empty " + what);
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size())
        throw DataError("line " + std::to_string(line_no) + ": invalid " + what + ": '" + field + "'");
    return value;
}

}  // namespace detail

// Snapshot file: header "session_id,viewers", one session per row.
inline std::vector<SessionSnapshot> read_snapshots(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!detail::next_line(in, line, line_no))
        throw DataError("snapshot: missing header 'session_id,viewers'");
    if (line != "session_id,viewers")
        throw DataError("snapshot: expected header 'session_id,viewers', got '" + line + "'");
    std::vector<SessionSnapshot> snapshots;
    std::vector<std::string> fields;
    while (detail::next_line(in, line, line_no)) {
        detail::split_line(line, fields);
        if (fields.size() != 2)
            throw DataError("line " + std::to_string(line_no) + ": expected 2 fields, got " +
                            std::to_string(fields.size()));
        if (fields[0].empty())
            throw DataError("line " + std::to_string(line_no) + ": empty session_id");
        const std::int64_t viewers = detail::parse_int(fields[1], line_no, "viewer count");
        if (viewers < 0)
            throw DataError("line " + std::to_string(line_no) + ": negative viewer count");
        snapshots.push_back({fields[0], viewers});
    }
    return snapshots;
}

// Trace file: header "timestamp,event,session_id"; event in {start,end,join,leave}.
inline EventTrace read_trace(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!detail::next_line(in, line, line_no))
        throw DataError("trace: missing header 'timestamp,event,session_id'");
    if (line != "timestamp,event,session_id")
        throw DataError("trace: expected header 'timestamp,event,session_id', got '" + line + "'");
    EventTrace trace;
    std::vector<std::string> fields;
    while (detail::next_line(in, line, line_no)) {
        detail::split_line(line, fields);
        if (fields.size() != 3)
            throw DataError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        TraceEvent event;
        event.timestamp = detail::parse_double(fields[0], line_no, "timestamp");
        if (fields[1] == "start")
            event.kind = EventKind::SessionStart;
        else if (fields[1] == "end")
            event.kind = EventKind::SessionEnd;
        else if (fields[1] == "join")
            event.kind = EventKind::ViewerJoin;
        else if (fields[1] == "leave")
            event.kind = EventKind::ViewerLeave;
        else
            throw DataError("line " + std::to_string(line_no) + ": unknown event '" + fields[1] + "'");
        if (fields[2].empty())
            throw DataError("line " + std::to_string(line_no) + ": empty session_id");
        event.session_id = fields[2];
        trace.events.push_back(std::move(event));
    }
    return trace;
}

}  // namespace popalloc::csv
