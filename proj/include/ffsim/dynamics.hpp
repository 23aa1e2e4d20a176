#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <utility>
#include <vector>

#include "ffsim/config.hpp"
#include "ffsim/decision.hpp"
#include "ffsim/events.hpp"
#include "ffsim/geometry.hpp"
#include "ffsim/rng.hpp"
#include "ffsim/scheduler.hpp"
#include "ffsim/world.hpp"

namespace ffsim {

struct Contender {
  std::int64_t id = -1;
  double gamma = 0.0;
};

struct Resolution {
  bool blocked = false;     // friction froze the cell; nobody enters
  std::int64_t winner = -1; // valid iff !blocked
};

/// Decides who enters a cell contested by two or more agents. Contenders
/// must be sorted by id.
///
/// The most aggressive contender wins outright: a single agent with the
/// highest gamma enters without any randomness. Only when several agents
/// tie at the highest gamma G does friction act: the cell stays empty with
/// probability mu * (1 - G), otherwise one of the tied agents is picked
/// uniformly. A tie therefore costs one draw when blocked, two when not.
inline Resolution resolve_conflict(const InlineVec<Contender, 8>& contenders,
                                   double mu, RandomStream& rng) {
  FFSIM_CHECK(contenders.size() >= 2, "conflict needs two or more contenders");
  double gmax = contenders[0].gamma;
  for (const Contender& c : contenders) gmax = std::max(gmax, c.gamma);
  InlineVec<std::int64_t, 8> top;
  for (const Contender& c : contenders)
    if (c.gamma == gmax) top.push_back(c.id);

  if (top.size() == 1) return {false, top[0]};
  if (rng.uniform01() < mu * (1.0 - gmax)) return {true, -1};
  return {false, top[rng.pick(top.size())]};
}

namespace detail {

enum class DecisionKind { depart, stay, bond, claim };

struct Decision {
  std::int64_t id;
  double time;  // the agent's desired activation time
  DecisionKind kind;
  Cell target;
};

}  // namespace detail

/// Advances the world through algorithm step k, the interval
/// [k*h, (k+1)*h). Appends this step's events to the log in time order.
///
/// Phase A, decisions. Agents due before (k+1)*h activate in (time, id)
/// order. An activating agent first gives up any bond it still holds. An
/// agent standing on the exit cell leaves the room; its crossing was
/// already logged when it stepped onto the door, so the removal is silent.
/// Everyone else samples the movement kernel once against the occupancy all
/// decisions of this step share: the own cell means stay, an occupied cell
/// creates a bond to it, an empty cell claims it.
///
/// Phase B, commitment. Departures commit first, in due order. Claimed
/// cells resolve next in ascending (x, y) order, then cells freed by the
/// movers, in the order they were freed. Every vacated cell with waiting
/// bond holders joins the back of that queue, so chains of bonded agents
/// advance within one step. A cell with a single mover hands itself over
/// directly; contested cells go through resolve_conflict and log one
/// conflict line plus a block line per agent kept out. All bonds to a
/// resolved cell are spent, win or lose. A move onto the exit cell commits
/// like any other but is logged as an exit line, not a move: the recorded
/// leaving time is the activation that reaches the door, while the body
/// blocks the door until the agent's next activation.
///
/// Phase C, bookkeeping. Due agents reschedule: a won claim costs tau,
/// or tau * sqrt(2) when the step was diagonal; staying, bonding and losing
/// cost tau. Bond holders pulled forward by a vacancy keep their already
/// scheduled activation. New arrivals then enter: the number of arrivals in
/// the interval is Poisson(alpha * h), each joins the back of the waiting
/// queue with a group drawn by weight, and the queue fills uniformly chosen
/// empty entrance cells at time (k+1)*h, first come first served. An
/// arrival's first activation is its entry time plus its tau.
inline void advance_step(WorldState& world, const SimConfig& cfg,
                         const StaticField& field, std::int64_t k,
                         RandomStream& rng, EventLog& log) {
  using detail::Decision;
  using detail::DecisionKind;
  const double interval_end = static_cast<double>(k + 1) * cfg.h;
  const Cell exit_cell = world.geom.exit_cell();
  const std::size_t step_events_begin = log.events.size();

  // Phase A.
  std::vector<Decision> decisions;
  std::map<Cell, std::vector<std::pair<double, std::int64_t>>> claims;
  for (auto [time, id] : world.queue.due_before(interval_end)) {
    world.drop_bond(id);
    const AgentState& a = world.agents.at(id);
    if (a.cell == exit_cell) {
      decisions.push_back({id, time, DecisionKind::depart, exit_cell});
      continue;
    }
    NeighborhoodView view =
        build_view(field, a.cell, [&](Cell c) { return !world.is_empty(c); });
    TargetDistribution dist = target_distribution(view, cfg.k_s, cfg.k_o, cfg.k_d);
    Cell target = sample_target(dist, rng.uniform01());
    if (target == a.cell) {
      decisions.push_back({id, time, DecisionKind::stay, target});
    } else if (!world.is_empty(target)) {
      world.add_bond(id, target, time);
      decisions.push_back({id, time, DecisionKind::bond, target});
    } else {
      claims[target].emplace_back(time, id);
      decisions.push_back({id, time, DecisionKind::claim, target});
    }
  }

  // Phase B.
  struct Job {
    Cell cell;
    double time;
    bool vacancy;  // false: phase-A claim, true: cell freed this step
  };
  std::deque<Job> jobs;
  std::map<std::int64_t, MoveKind> moved;

  auto enter = [&](std::int64_t id, Cell to, double time) {
    const AgentState& a = world.agents.at(id);
    Cell from = a.cell;
    MoveKind kind = is_diagonal_step(from, to) ? MoveKind::diagonal : MoveKind::straight;
    world.move_agent(id, to);
    moved.emplace(id, kind);
    EventKind what = to == exit_cell ? EventKind::exit : EventKind::move;
    log.events.push_back({time, what, id, a.group, to});
    if (world.bonds_on.count(from))
      jobs.push_back({from, time, true});
  };

  for (const Decision& d : decisions) {
    if (d.kind != DecisionKind::depart) continue;
    world.remove_agent(d.id);
    if (world.bonds_on.count(exit_cell))
      jobs.push_back({exit_cell, d.time, true});
  }
  // Claim cells ahead of the departure vacancies queued above.
  for (auto it = claims.rbegin(); it != claims.rend(); ++it) {
    double latest = 0.0;
    for (auto [time, id] : it->second) latest = std::max(latest, time);
    jobs.push_front({it->first, latest, false});
  }

  while (!jobs.empty()) {
    Job job = jobs.front();
    jobs.pop_front();
    FFSIM_CHECK(world.is_empty(job.cell), "resolving a cell that is not empty");

    InlineVec<Contender, 8> contenders;
    if (job.vacancy) {
      for (std::int64_t id : world.bond_holders(job.cell))
        contenders.push_back({id, world.agents.at(id).gamma});
      for (const Contender& c : contenders) world.drop_bond(c.id);
    } else {
      auto& claimants = claims.at(job.cell);  // (time, id) pairs
      std::sort(claimants.begin(), claimants.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
      for (auto [time, id] : claimants)
        contenders.push_back({id, world.agents.at(id).gamma});
    }
    FFSIM_CHECK(!contenders.empty(), "resolution job without contenders");

    if (contenders.size() == 1) {
      enter(contenders[0].id, job.cell, job.time);
      continue;
    }
    Resolution r = resolve_conflict(contenders, cfg.mu, rng);
    log.events.push_back({job.time, EventKind::conflict, r.blocked ? -1 : r.winner,
                          r.blocked ? -1 : world.agents.at(r.winner).group, job.cell});
    for (const Contender& c : contenders) {
      if (!r.blocked && c.id == r.winner) continue;
      log.events.push_back({job.time, EventKind::block, c.id,
                            world.agents.at(c.id).group, job.cell});
    }
    if (!r.blocked) enter(r.winner, job.cell, job.time);
  }

  std::stable_sort(log.events.begin() + static_cast<std::ptrdiff_t>(step_events_begin),
                   log.events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });

  // Phase C.
  for (const Decision& d : decisions) {
    if (d.kind == DecisionKind::depart) continue;
    const AgentState& a = world.agents.at(d.id);
    MoveKind kind = MoveKind::stay;
    if (d.kind == DecisionKind::claim) {
      auto it = moved.find(d.id);
      if (it != moved.end()) kind = it->second;
    }
    world.queue.reschedule(d.id, kind, a.tau);
  }

  if (cfg.inflow_alpha > 0.0) {
    int arrivals = rng.poisson(cfg.inflow_alpha * cfg.h);
    for (int i = 0; i < arrivals; ++i) {
      double u = rng.uniform01();
      double cum = 0.0;
      int group = static_cast<int>(cfg.groups.size()) - 1;
      for (std::size_t gi = 0; gi < cfg.groups.size(); ++gi) {
        cum += cfg.groups[gi].weight;
        if (u < cum) {
          group = static_cast<int>(gi);
          break;
        }
      }
      world.waiting_arrivals.push_back(group);
    }
  }
  std::vector<Cell> open = world.geom.entrance_cells();
  std::erase_if(open, [&](Cell c) { return !world.is_empty(c); });
  std::sort(open.begin(), open.end());
  while (!world.waiting_arrivals.empty() && !open.empty()) {
    std::size_t pos = rng.pick(open.size());
    Cell cell = open[pos];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pos));
    int group = world.waiting_arrivals.front();
    world.waiting_arrivals.pop_front();
    const GroupSpec& spec = cfg.groups[static_cast<std::size_t>(group)];
    AgentState a;
    a.id = world.next_agent_id++;
    a.group = group;
    a.tau = spec.tau;
    a.gamma = spec.gamma;
    a.cell = cell;
    a.entered_at = interval_end;
    world.place_agent(a, a.entered_at + a.tau);
    log.events.push_back({a.entered_at, EventKind::entry, a.id, a.group, a.cell});
  }
}

}  // namespace ffsim
