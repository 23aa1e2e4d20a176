#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "ffsim/geometry.hpp"
#include "ffsim/scheduler.hpp"
#include "ffsim/util.hpp"

namespace ffsim {

struct AgentState {
  std::int64_t id = -1;
  int group = -1;        // index into the config's group list
  double tau = 0.0;
  double gamma = 0.0;
  Cell cell;
  double entered_at = 0.0;
};

/// A waiting claim on an occupied cell. The holder keeps it until either the
/// cell vacates (the holder then contends for the cell at once) or the
/// holder's own next activation, whichever comes first.
struct Bond {
  Cell target;
  double created_at = 0.0;
};

/// Everything that changes while a run advances: agents and where they
/// stand, their desired activation times, live bonds, and arrivals waiting
/// for a free entrance cell.
struct WorldState {
  LatticeGeometry geom;
  std::vector<std::int64_t> occupancy;  // agent id per cell index, -1 = empty
  std::map<std::int64_t, AgentState> agents;
  ActivationQueue queue;
  std::map<std::int64_t, Bond> bond_of;          // at most one per agent
  std::map<Cell, std::vector<std::int64_t>> bonds_on;  // holders per target cell
  std::deque<int> waiting_arrivals;  // group index per arrival, FIFO
  std::int64_t next_agent_id = 0;
  std::int64_t entered_count = 0;
  std::int64_t exited_count = 0;

  explicit WorldState(const LatticeGeometry& g)
      : geom(g), occupancy(g.cell_count(), -1) {}

  std::int64_t occupant(Cell c) const { return occupancy[geom.index(c)]; }
  bool is_empty(Cell c) const { return occupant(c) == -1; }

  void place_agent(const AgentState& a, double first_activation) {
    FFSIM_CHECK(is_empty(a.cell), "placing agent on an occupied cell");
    occupancy[geom.index(a.cell)] = a.id;
    agents.emplace(a.id, a);
    queue.insert(a.id, first_activation);
    ++entered_count;
  }

  void move_agent(std::int64_t id, Cell to) {
    AgentState& a = agents.at(id);
    FFSIM_CHECK(is_empty(to), "moving agent onto an occupied cell");
    occupancy[geom.index(a.cell)] = -1;
    occupancy[geom.index(to)] = id;
    a.cell = to;
  }

  void remove_agent(std::int64_t id) {
    AgentState& a = agents.at(id);
    occupancy[geom.index(a.cell)] = -1;
    queue.remove(id);
    drop_bond(id);
    agents.erase(id);
    ++exited_count;
  }

  void add_bond(std::int64_t id, Cell target, double created_at) {
    FFSIM_CHECK(bond_of.count(id) == 0, "agent already holds a bond");
    bond_of.emplace(id, Bond{target, created_at});
    bonds_on[target].push_back(id);
  }

  void drop_bond(std::int64_t id) {
    auto it = bond_of.find(id);
    if (it == bond_of.end()) return;
    auto& holders = bonds_on.at(it->second.target);
    std::erase(holders, id);
    if (holders.empty()) bonds_on.erase(it->second.target);
    bond_of.erase(it);
  }

  /// Holders bonded to the cell, ascending by id. Used when the cell vacates.
  std::vector<std::int64_t> bond_holders(Cell c) const {
    auto it = bonds_on.find(c);
    if (it == bonds_on.end()) return {};
    std::vector<std::int64_t> holders = it->second;
    std::sort(holders.begin(), holders.end());
    return holders;
  }

  std::int64_t agents_in_room() const { return static_cast<std::int64_t>(agents.size()); }

  /// Cross-structure consistency. Cheap enough to run every step; any
  /// violation is a bug in the step logic, not a data problem.
  void check_invariants() const {
    std::int64_t occupied = 0;
    for (std::size_t i = 0; i < occupancy.size(); ++i) {
      std::int64_t id = occupancy[i];
      if (id == -1) continue;
      ++occupied;
      auto it = agents.find(id);
      FFSIM_CHECK(it != agents.end(), "occupancy names a missing agent");
      FFSIM_CHECK(geom.index(it->second.cell) == i, "occupancy disagrees with agent cell");
    }
    FFSIM_CHECK(occupied == agents_in_room(), "agent count disagrees with occupancy");
    FFSIM_CHECK(queue.size() == agents.size(), "queue size disagrees with agent count");
    for (const auto& [id, a] : agents) {
      FFSIM_CHECK(a.id == id, "agent id disagrees with its key");
      FFSIM_CHECK(queue.contains(id), "agent missing from the activation queue");
    }
    FFSIM_CHECK(entered_count == agents_in_room() + exited_count,
                "entered != in room + exited");
    std::size_t bond_count = 0;
    for (const auto& [cell, holders] : bonds_on) {
      FFSIM_CHECK(!holders.empty(), "empty holder list kept alive");
      FFSIM_CHECK(!is_empty(cell), "bond target is an empty cell");
      for (std::int64_t id : holders) {
        auto it = bond_of.find(id);
        FFSIM_CHECK(it != bond_of.end(), "holder list names an agent without a bond");
        FFSIM_CHECK(it->second.target == cell, "bond target disagrees with holder list");
        FFSIM_CHECK(agents.count(id) == 1, "bond held by a missing agent");
        ++bond_count;
      }
    }
    FFSIM_CHECK(bond_count == bond_of.size(), "bond index sizes disagree");
  }
};

}  // namespace ffsim
