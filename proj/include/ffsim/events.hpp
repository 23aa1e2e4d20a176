#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ffsim/geometry.hpp"
#include "ffsim/util.hpp"

namespace ffsim {

/// What a run records, one line per event:
///   entry     agent appears on an entrance cell
///   move      agent enters a new cell (including the exit cell)
///   conflict  two or more agents contested a cell; the line names the
///             winner, or agent -1 when friction blocked the cell
///   block     an agent contested a cell and did not enter it
///   exit      agent leaves the room through the exit cell
enum class EventKind { entry, move, conflict, block, exit };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::entry: return "entry";
    case EventKind::move: return "move";
    case EventKind::conflict: return "conflict";
    case EventKind::block: return "block";
    case EventKind::exit: return "exit";
  }
  FFSIM_CHECK(false, "unknown event kind");
  return "";
}

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::entry;
  std::int64_t agent = -1;  // -1 only on conflict lines with no winner
  int group = -1;           // index into EventLog::group_labels, -1 with agent -1
  Cell cell;

  friend bool operator==(const Event&, const Event&) = default;
};

/// The full record of one run: the group label table plus all events in
/// chronological order (ties keep the order the engine resolved them in).
struct EventLog {
  std::vector<std::string> group_labels;
  std::vector<Event> events;

  int group_index(std::string_view label) {
    for (std::size_t i = 0; i < group_labels.size(); ++i)
      if (group_labels[i] == label) return static_cast<int>(i);
    group_labels.emplace_back(label);
    return static_cast<int>(group_labels.size() - 1);
  }
};

// ---------------------------------------------------------------------------
// File form: a header line, then one comma-separated line per event.
//
//   time,kind,agent,group,x,y
//   0.1,entry,0,fast_calm,17,3
//
// The group column carries the label so files are self-describing; agent -1
// lines leave it empty.
// ---------------------------------------------------------------------------

inline void write_events(std::ostream& out, const EventLog& log) {
  out << "time,kind,agent,group,x,y\n";
  for (const Event& e : log.events) {
    out << format_double(e.time) << ',' << to_string(e.kind) << ',' << e.agent << ',';
    if (e.group >= 0) out << log.group_labels[static_cast<std::size_t>(e.group)];
    out << ',' << e.cell.x << ',' << e.cell.y << '\n';
  }
}

inline void write_events(const std::string& path, const EventLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_events(out, log);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

/// Strict reader: every line must have six fields, a known kind, and numeric
/// fields that parse exactly. Errors name the source and line number.
inline EventLog read_events(std::istream& in, const std::string& source_name) {
  auto fail = [&](int lineno, const std::string& what) {
    throw ParseError(source_name + ":" + std::to_string(lineno) + ": " + what);
  };
  EventLog log;
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) fail(1, "missing header line");
  ++lineno;
  if (trim(line) != "time,kind,agent,group,x,y")
    fail(lineno, "bad header, expected 'time,kind,agent,group,x,y'");
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty()) continue;
    auto fields = split(s, ',');
    if (fields.size() != 6) fail(lineno, "expected 6 fields, got " + std::to_string(fields.size()));
    Event e;
    if (!parse_double(fields[0], e.time)) fail(lineno, "bad time '" + std::string(fields[0]) + "'");
    std::string_view kind = fields[1];
    if (kind == "entry") e.kind = EventKind::entry;
    else if (kind == "move") e.kind = EventKind::move;
    else if (kind == "conflict") e.kind = EventKind::conflict;
    else if (kind == "block") e.kind = EventKind::block;
    else if (kind == "exit") e.kind = EventKind::exit;
    else fail(lineno, "unknown event kind '" + std::string(kind) + "'");
    long long agent;
    if (!parse_int64(fields[2], agent)) fail(lineno, "bad agent id '" + std::string(fields[2]) + "'");
    e.agent = agent;
    if (fields[3].empty()) {
      if (e.agent != -1) fail(lineno, "empty group on a line with an agent id");
      e.group = -1;
    } else {
      e.group = log.group_index(fields[3]);
    }
    long long x, y;
    if (!parse_int64(fields[4], x)) fail(lineno, "bad x '" + std::string(fields[4]) + "'");
    if (!parse_int64(fields[5], y)) fail(lineno, "bad y '" + std::string(fields[5]) + "'");
    e.cell = {static_cast<int>(x), static_cast<int>(y)};
    log.events.push_back(e);
  }
  return log;
}

inline EventLog read_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_events(in, path);
}

}  // namespace ffsim
