#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rtgraph/graph.hpp"

namespace rtgraph {

/// JSON-lines event log, one event per line in time order:
///   {"t": 0, "type": "T1", "source": 0, "tree": 0}
///   {"t": 1, "type": "T2", "source": 0, "target": 1, "tree": 0}
///   {"t": 2, "type": "T3", "source": 1, "target": 0, "tree": 0}
void write_event_log(std::ostream& out, std::span<const ArrivalEvent> events);
std::string event_to_json_line(std::uint64_t t, const ArrivalEvent& event);

/// Parses a log written by write_event_log. Blank lines are ignored; a
/// malformed line or a "t" that is not the line's time index throws
/// EventError naming the line number.
std::vector<ArrivalEvent> read_event_log(std::istream& in);
std::vector<ArrivalEvent> read_event_log_file(const std::string& path);

}  // namespace rtgraph
