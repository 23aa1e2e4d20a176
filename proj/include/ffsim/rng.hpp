#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ffsim/util.hpp"

namespace ffsim {

/// splitmix64 single step; used only to derive per-run seeds for sweeps.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for run (alpha_index, rep_index) of a sweep:
///   seed_base XOR splitmix64(alpha_index * 2^32 + rep_index).
/// Stable across tool versions; replaying a manifest reproduces each run.
inline std::uint64_t derive_run_seed(std::uint64_t seed_base,
                                     std::size_t alpha_index,
                                     std::size_t rep_index) {
  return seed_base ^ splitmix64((static_cast<std::uint64_t>(alpha_index) << 32) |
                                static_cast<std::uint64_t>(rep_index));
}

/// The single random stream of a simulation run.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so identical seeds give identical runs on every platform.
/// All variate mappings below are hand-rolled on top of raw 64-bit draws
/// (standard-library distributions are not portable across implementations).
///
/// Draw order within a run is documented in engine.hpp; golden tests depend
/// on it.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() {
    ++draw_count_;
    return eng_();
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Raw 64-bit draws consumed so far. Tests assert on this to pin the
  /// documented draw order.
  std::uint64_t draw_count() const { return draw_count_; }

  /// Uniform index in [0, n). One draw.
  std::size_t pick(std::size_t n) {
    FFSIM_CHECK(n > 0, "pick from empty range");
    auto idx = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return idx < n ? idx : n - 1;
  }

  /// Poisson variate by Knuth's product-of-uniforms method. Exact and
  /// portable; intended for small means (per-step arrival counts).
  int poisson(double mean) {
    FFSIM_CHECK(mean >= 0.0, "poisson mean must be >= 0");
    if (mean == 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t draw_count_ = 0;
};

}  // namespace ffsim
