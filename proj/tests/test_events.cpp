#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <sstream>

#include "ffsim/events.hpp"

using namespace ffsim;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

EventLog sample_log() {
  EventLog log;
  log.group_labels = {"fast_calm", "slow_calm"};
  log.events = {
      {0.1, EventKind::entry, 0, 0, {17, 3}},
      {0.35, EventKind::move, 0, 0, {16, 3}},
      {0.4, EventKind::conflict, -1, -1, {5, 0}},
      {0.4, EventKind::block, 2, 1, {5, 0}},
      {7.25, EventKind::exit, 0, 0, {0, 0}},
  };
  return log;
}

}  // namespace

TEST_CASE("event logs round-trip through their file form", "[events]") {
  EventLog log = sample_log();
  std::ostringstream out;
  write_events(out, log);
  std::istringstream in(out.str());
  EventLog back = read_events(in, "mem");
  CHECK(back.events == log.events);
  CHECK(back.group_labels == log.group_labels);
}

TEST_CASE("written lines use labels and leave the group empty for agent -1",
          "[events]") {
  std::ostringstream out;
  write_events(out, sample_log());
  std::string text = out.str();
  CHECK_THAT(text, ContainsSubstring("time,kind,agent,group,x,y\n"));
  CHECK_THAT(text, ContainsSubstring("0.1,entry,0,fast_calm,17,3\n"));
  CHECK_THAT(text, ContainsSubstring("0.4,conflict,-1,,5,0\n"));
  CHECK_THAT(text, ContainsSubstring("0.4,block,2,slow_calm,5,0\n"));
  CHECK_THAT(text, ContainsSubstring("7.25,exit,0,fast_calm,0,0\n"));
}

TEST_CASE("reader rejects malformed logs, naming source and line", "[events]") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_events(in, "log.csv");
  };
  const std::string header = "time,kind,agent,group,x,y\n";

  CHECK_THROWS_MATCHES(parse(""), ParseError,
                       MessageMatches(ContainsSubstring("missing header")));
  CHECK_THROWS_MATCHES(parse("time,kind\n"), ParseError,
                       MessageMatches(ContainsSubstring("log.csv:1")));
  CHECK_THROWS_MATCHES(parse(header + "0.1,entry,0,g\n"), ParseError,
                       MessageMatches(ContainsSubstring("log.csv:2")));
  CHECK_THROWS_MATCHES(parse(header + "0.1,teleport,0,g,1,1\n"), ParseError,
                       MessageMatches(ContainsSubstring("teleport")));
  CHECK_THROWS_MATCHES(parse(header + "zzz,entry,0,g,1,1\n"), ParseError,
                       MessageMatches(ContainsSubstring("bad time")));
  CHECK_THROWS_MATCHES(parse(header + "0.1,entry,x,g,1,1\n"), ParseError,
                       MessageMatches(ContainsSubstring("bad agent")));
  CHECK_THROWS_MATCHES(parse(header + "0.1,entry,0,g,a,1\n"), ParseError,
                       MessageMatches(ContainsSubstring("bad x")));
  // An empty group is only allowed on agent -1 lines.
  CHECK_THROWS_MATCHES(parse(header + "0.1,entry,3,,1,1\n"), ParseError,
                       MessageMatches(ContainsSubstring("empty group")));
  CHECK_NOTHROW(parse(header + "0.1,conflict,-1,,1,1\n"));
}

TEST_CASE("reader builds the label table in order of first appearance", "[events]") {
  const std::string text =
      "time,kind,agent,group,x,y\n"
      "0.1,entry,0,slow_calm,17,0\n"
      "0.2,entry,1,fast_calm,17,1\n"
      "0.3,move,0,slow_calm,16,0\n";
  std::istringstream in(text);
  EventLog log = read_events(in, "mem");
  CHECK(log.group_labels == std::vector<std::string>{"slow_calm", "fast_calm"});
  CHECK(log.events[0].group == 0);
  CHECK(log.events[1].group == 1);
  CHECK(log.events[2].group == 0);
}

TEST_CASE("blank lines are skipped, times keep full precision", "[events]") {
  EventLog log;
  log.group_labels = {"g"};
  log.events = {{0.1 + 0.25 * 17 * std::numbers::sqrt2, EventKind::entry, 0, 0, {1, 1}}};
  std::ostringstream out;
  write_events(out, log);
  std::istringstream in(out.str() + "\n\n");
  EventLog back = read_events(in, "mem");
  REQUIRE(back.events.size() == 1);
  CHECK(back.events[0].time == log.events[0].time);  // bitwise
}
