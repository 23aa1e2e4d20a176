#pragma once

#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ffsim/config.hpp"
#include "ffsim/dynamics.hpp"
#include "ffsim/events.hpp"
#include "ffsim/rng.hpp"
#include "ffsim/world.hpp"

namespace ffsim {

/// Runs one simulation to completion and returns its event log.
///
/// A run is a pure function of the validated config. It consumes a single
/// random stream seeded with cfg.seed, in this fixed order per step:
///
///   1. one uniform per activating agent, in (activation time, id) order,
///      none for an agent leaving through the exit;
///   2. per contested cell, in resolution order: one uniform for the
///      friction test when the top aggressiveness is tied, and one more to
///      pick the winner when the cell is not blocked;
///   3. the Poisson arrival count (one uniform per trial, skipped entirely
///      when alpha is 0), then one uniform per arrival for its group, then
///      one per placed agent for its entrance cell.
///
/// Changing this order is a breaking change; golden tests pin it.
inline EventLog run(const SimConfig& config) {
  SimConfig cfg = validate_config(config);
  StaticField field = build_static_field(cfg.geometry);
  WorldState world(cfg.geometry);
  RandomStream rng(cfg.seed);
  EventLog log;
  for (const GroupSpec& g : cfg.groups) log.group_labels.push_back(g.label);

  for (std::int64_t k = 0; static_cast<double>(k) * cfg.h < cfg.duration; ++k) {
    advance_step(world, cfg, field, k, rng, log);
    world.check_invariants();
  }
  return log;
}

struct SweepRun {
  std::size_t alpha_index = 0;
  std::size_t rep_index = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  EventLog log;
};

/// Worker threads for a sweep: FFSIM_THREADS if set, else the hardware
/// concurrency, always at least 1.
inline unsigned sweep_thread_count() {
  if (const char* env = std::getenv("FFSIM_THREADS")) {
    long long n;
    if (parse_int64(env, n) && n >= 1) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

/// Runs replications at every inflow level and feeds the results to the
/// consumer in (alpha_index, rep_index) order, whatever order they finish
/// in. Run (i, r) uses seed derive_run_seed(base.seed, i, r), so any single
/// run can be reproduced alone. Threads never race ahead of the consumer by
/// more than a small window, which bounds the logs held in memory.
inline void run_sweep(const SimConfig& base, const std::vector<double>& alphas,
                      std::size_t replications,
                      const std::function<void(const SweepRun&)>& consumer) {
  SimConfig cfg = validate_config(base);
  FFSIM_CHECK(!alphas.empty(), "sweep needs at least one alpha");
  FFSIM_CHECK(replications >= 1, "sweep needs at least one replication");
  for (double a : alphas)
    if (!(a >= 0.0)) throw std::invalid_argument("sweep alpha must be >= 0");

  const std::size_t total = alphas.size() * replications;
  const unsigned threads = static_cast<unsigned>(
      std::min<std::size_t>(sweep_thread_count(), total));
  const std::size_t window = std::max<std::size_t>(2 * threads, 4);

  std::mutex mtx;
  std::condition_variable cv;
  std::vector<std::optional<SweepRun>> done(total);
  std::size_t next_claim = 0;
  std::size_t delivered = 0;
  bool cancelled = false;

  auto work = [&]() {
    for (;;) {
      std::size_t job;
      {
        std::unique_lock lock(mtx);
        cv.wait(lock, [&] {
          return cancelled || next_claim >= total || next_claim < delivered + window;
        });
        if (cancelled || next_claim >= total) return;
        job = next_claim++;
      }
      SweepRun r;
      r.alpha_index = job / replications;
      r.rep_index = job % replications;
      r.alpha = alphas[r.alpha_index];
      r.seed = derive_run_seed(cfg.seed, r.alpha_index, r.rep_index);
      SimConfig run_cfg = cfg;
      run_cfg.inflow_alpha = r.alpha;
      run_cfg.seed = r.seed;
      r.log = run(run_cfg);
      {
        std::lock_guard lock(mtx);
        done[job] = std::move(r);
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);

  try {
    std::unique_lock lock(mtx);
    while (delivered < total) {
      cv.wait(lock, [&] { return done[delivered].has_value(); });
      SweepRun r = std::move(*done[delivered]);
      done[delivered].reset();
      ++delivered;
      cv.notify_all();
      lock.unlock();
      consumer(r);
      lock.lock();
    }
  } catch (...) {
    {
      std::lock_guard lock(mtx);
      cancelled = true;
    }
    cv.notify_all();
    for (std::thread& t : pool) t.join();
    throw;
  }
  for (std::thread& t : pool) t.join();
}

inline std::vector<SweepRun> run_sweep(const SimConfig& base,
                                       const std::vector<double>& alphas,
                                       std::size_t replications) {
  std::vector<SweepRun> out;
  out.reserve(alphas.size() * replications);
  run_sweep(base, alphas, replications,
            [&](const SweepRun& r) { out.push_back(r); });
  return out;
}

}  // namespace ffsim
