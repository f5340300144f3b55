#include "rtgraph/event_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace rtgraph {

std::string event_to_json_line(std::uint64_t t, const ArrivalEvent& e) {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["type"] = to_string(e.type);
  j["source"] = e.source;
  if (e.type != ArrivalType::T1) j["target"] = e.target;
  j["tree"] = e.tree;
  return j.dump();
}

void write_event_log(std::ostream& out, std::span<const ArrivalEvent> events) {
  std::uint64_t t = 0;
  for (const ArrivalEvent& e : events) out << event_to_json_line(t++, e) << '\n';
}

std::vector<ArrivalEvent> read_event_log(std::istream& in) {
  std::vector<ArrivalEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "event log line " + std::to_string(line_no) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      ArrivalEvent e;
      e.type = arrival_type_from_string(j.at("type").get<std::string>());
      e.source = j.at("source").get<UserId>();
      if (e.type != ArrivalType::T1) e.target = j.at("target").get<UserId>();
      e.tree = j.at("tree").get<TreeId>();
      if (j.contains("t") && j["t"].get<std::uint64_t>() != events.size())
        throw EventError("expected t = " + std::to_string(events.size()));
      events.push_back(e);
    } catch (const nlohmann::json::exception& ex) {
      throw EventError(where + ex.what());
    } catch (const EventError& ex) {
      throw EventError(where + ex.what());
    }
  }
  return events;
}

std::vector<ArrivalEvent> read_event_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open event log '" + path + "'");
  return read_event_log(in);
}

}  // namespace rtgraph
