#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "ffsim/util.hpp"

namespace ffsim {

enum class MoveKind { stay, straight, diagonal };

/// Time that a move of this kind consumes: tau for staying or a straight
/// step, tau * sqrt(2) for a diagonal step (same speed, longer path).
inline double activation_increment(MoveKind kind, double tau) {
  return kind == MoveKind::diagonal ? tau * std::numbers::sqrt2 : tau;
}

/// Desired activation times of all agents in the room, ordered by
/// (time, agent id). The engine queries the agents due before the end of the
/// current interval and advances each one by the cost of the move it made.
///
/// Times accumulate per agent (t += increment); they are never recomputed
/// from step indices, so an agent's activation sequence is independent of
/// the interval width h.
class ActivationQueue {
 public:
  using Entry = std::pair<double, std::int64_t>;  // (time, agent id)

  void insert(std::int64_t id, double time) {
    auto [it, fresh] = time_by_id_.emplace(id, time);
    FFSIM_CHECK(fresh, "agent already scheduled");
    by_time_.insert({time, id});
  }

  void remove(std::int64_t id) {
    auto it = time_by_id_.find(id);
    FFSIM_CHECK(it != time_by_id_.end(), "agent not scheduled");
    by_time_.erase({it->second, id});
    time_by_id_.erase(it);
  }

  bool contains(std::int64_t id) const { return time_by_id_.count(id) != 0; }

  double time_of(std::int64_t id) const {
    auto it = time_by_id_.find(id);
    FFSIM_CHECK(it != time_by_id_.end(), "agent not scheduled");
    return it->second;
  }

  /// All entries with time < limit, ascending by (time, id). Non-mutating;
  /// the engine reschedules each agent after resolving its move.
  std::vector<Entry> due_before(double limit) const {
    std::vector<Entry> due;
    for (const Entry& e : by_time_) {
      if (!(e.first < limit)) break;
      due.push_back(e);
    }
    return due;
  }

  /// Advances the agent's desired time by the cost of the move it made.
  void reschedule(std::int64_t id, MoveKind kind, double tau) {
    auto it = time_by_id_.find(id);
    FFSIM_CHECK(it != time_by_id_.end(), "agent not scheduled");
    by_time_.erase({it->second, id});
    it->second += activation_increment(kind, tau);
    by_time_.insert({it->second, id});
  }

  std::size_t size() const { return time_by_id_.size(); }
  bool empty() const { return time_by_id_.empty(); }

 private:
  std::set<Entry> by_time_;
  std::map<std::int64_t, double> time_by_id_;
};

}  // namespace ffsim
