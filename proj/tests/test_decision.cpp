#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "ffsim/decision.hpp"
#include "ffsim/geometry.hpp"
#include "ffsim/rng.hpp"

using namespace ffsim;

namespace {

// Extended-precision recomputation of the kernel, no minimum shift. The
// production code subtracts the smallest field value before exponentiating;
// agreement with this oracle shows the shift is a pure rescaling.
std::vector<long double> oracle(const NeighborhoodView& view, double k_s, double k_o,
                                double k_d) {
  std::vector<long double> w;
  long double total = 0.0L;
  for (const ViewCell& vc : view.cells) {
    long double x = std::exp(static_cast<long double>(-k_s) * vc.field);
    if (vc.occupied) x *= 1.0L - static_cast<long double>(k_o);
    if (vc.diagonal) x *= 1.0L - static_cast<long double>(k_d);
    w.push_back(x);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

TEST_CASE("kernel probabilities for an empty neighbourhood match a frozen"
          " extended-precision evaluation", "[decision]") {
  // Agent at (2, 0) on the default lattice, every cell free, default
  // coefficients. Values computed independently at 60 decimal digits.
  LatticeGeometry geom;
  StaticField field = build_static_field(geom);
  NeighborhoodView view = build_view(field, {2, 0}, [](Cell) { return false; });
  REQUIRE(view.cells.size() == 9);
  TargetDistribution dist = target_distribution(view, 3.5, 1.0, 0.7);

  const struct { Cell cell; double p; } golden[] = {
      {{1, -1}, 0.058724358889948097402},
      {{1, 0}, 0.83428484595581531036},
      {{1, 1}, 0.058724358889948097402},
      {{2, -1}, 0.011026891427967221945},
      {{2, 0}, 0.025193219376757681338},
      {{2, 1}, 0.011026891427967221945},
      {{3, -1}, 0.00012933236321691698284},
      {{3, 0}, 0.00076076930516253563757},
      {{3, 1}, 0.00012933236321691698284},
  };
  REQUIRE(dist.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(dist[i].cell == golden[i].cell);
    CHECK_THAT(dist[i].probability,
               Catch::Matchers::WithinAbs(golden[i].p, 1e-14));
  }
  double sum = 0.0;
  for (const auto& tp : dist) sum += tp.probability;
  CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("occupied cells get exactly zero probability at k_o = 1", "[decision]") {
  LatticeGeometry geom;
  StaticField field = build_static_field(geom);
  NeighborhoodView view =
      build_view(field, {2, 0}, [](Cell c) { return c == Cell{1, 0} || c == Cell{2, 1}; });
  TargetDistribution dist = target_distribution(view, 3.5, 1.0, 0.7);
  for (const auto& tp : dist) {
    if (tp.cell == Cell{1, 0} || tp.cell == Cell{2, 1}) {
      CHECK(tp.probability == 0.0);
    } else {
      CHECK(tp.probability > 0.0);
    }
  }
}

TEST_CASE("probability ratios carry the occupancy and diagonal factors exactly",
          "[decision]") {
  // Hand-built view with equal field values, so the exponential cancels and
  // only the structural factors remain.
  NeighborhoodView view;
  view.origin = {0, 0};
  view.cells.push_back({{0, 0}, 2.0, false, false});   // own cell
  view.cells.push_back({{1, 0}, 2.0, false, false});   // free straight
  view.cells.push_back({{0, 1}, 2.0, true, false});    // occupied straight
  view.cells.push_back({{1, 1}, 2.0, false, true});    // free diagonal
  view.cells.push_back({{1, -1}, 2.0, true, true});    // occupied diagonal
  const double k_o = 0.35, k_d = 0.7;
  TargetDistribution dist = target_distribution(view, 1.7, k_o, k_d);
  const double free_straight = dist[1].probability;
  CHECK_THAT(dist[2].probability / free_straight,
             Catch::Matchers::WithinAbs(1.0 - k_o, 1e-12));
  CHECK_THAT(dist[3].probability / free_straight,
             Catch::Matchers::WithinAbs(1.0 - k_d, 1e-12));
  CHECK_THAT(dist[4].probability / free_straight,
             Catch::Matchers::WithinAbs((1.0 - k_o) * (1.0 - k_d), 1e-12));
  CHECK(dist[0].probability == free_straight);  // own cell is neither
}

TEST_CASE("kernel matches the extended-precision oracle on random states",
          "[decision]") {
  RandomStream rng(2024);
  for (int iter = 0; iter < 300; ++iter) {
    NeighborhoodView view;
    view.origin = {0, 0};
    view.cells.push_back({{0, 0}, rng.uniform01() * 8.0, false, false});
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        if (rng.uniform01() < 0.25) continue;  // wall: absent from the view
        view.cells.push_back({{dx, dy}, rng.uniform01() * 8.0,
                              rng.uniform01() < 0.5, dx != 0 && dy != 0});
      }
    double k_s = rng.uniform01() * 5.0;
    double k_o = iter % 2 == 0 ? 1.0 : rng.uniform01();
    double k_d = rng.uniform01();
    TargetDistribution dist = target_distribution(view, k_s, k_o, k_d);
    auto expect = oracle(view, k_s, k_o, k_d);
    double sum = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      CHECK_THAT(dist[i].probability,
                 Catch::Matchers::WithinAbs(static_cast<double>(expect[i]), 1e-12));
      sum += dist[i].probability;
    }
    CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("view excludes walls and marks diagonals", "[decision]") {
  LatticeGeometry geom;
  StaticField field = build_static_field(geom);

  // Corner cell: only the 2x2 block around it exists.
  NeighborhoodView corner = build_view(field, {0, -5}, [](Cell) { return false; });
  REQUIRE(corner.cells.size() == 4);
  std::set<Cell> cells;
  for (const ViewCell& vc : corner.cells) cells.insert(vc.cell);
  CHECK(cells == std::set<Cell>{{0, -5}, {0, -4}, {1, -5}, {1, -4}});

  // Mid-wall cell on the entrance column.
  NeighborhoodView wall = build_view(field, {17, 0}, [](Cell) { return false; });
  CHECK(wall.cells.size() == 6);

  NeighborhoodView open = build_view(field, {5, 2}, [](Cell) { return false; });
  REQUIRE(open.cells.size() == 9);
  for (const ViewCell& vc : open.cells) {
    bool diag = vc.cell.x != 5 && vc.cell.y != 2;
    CHECK(vc.diagonal == diag);
  }
}

TEST_CASE("the deciding agent's own cell counts as free", "[decision]") {
  LatticeGeometry geom;
  StaticField field = build_static_field(geom);
  // occupied() claims everything is occupied; the own cell must still be free
  // and the distribution well defined even at k_o = 1.
  NeighborhoodView view = build_view(field, {5, 0}, [](Cell) { return true; });
  TargetDistribution dist = target_distribution(view, 3.5, 1.0, 0.7);
  double sum = 0.0;
  for (const auto& tp : dist) {
    if (tp.cell == Cell{5, 0}) {
      CHECK(tp.probability == 1.0);
    } else {
      CHECK(tp.probability == 0.0);
    }
    sum += tp.probability;
  }
  CHECK(sum == 1.0);
}

TEST_CASE("sample_target scans the cumulative distribution", "[decision]") {
  TargetDistribution dist;
  dist.push_back({{0, 0}, 0.25});
  dist.push_back({{1, 0}, 0.0});
  dist.push_back({{2, 0}, 0.5});
  dist.push_back({{3, 0}, 0.25});
  CHECK(sample_target(dist, 0.0) == Cell{0, 0});
  CHECK(sample_target(dist, 0.2499) == Cell{0, 0});
  CHECK(sample_target(dist, 0.25) == Cell{2, 0});  // zero-mass cell skipped
  CHECK(sample_target(dist, 0.74) == Cell{2, 0});
  CHECK(sample_target(dist, 0.75) == Cell{3, 0});
  CHECK(sample_target(dist, 0.999999) == Cell{3, 0});
  // If rounding leaves the cumulative sum short of u, the last cell with
  // positive probability takes the remainder.
  TargetDistribution short_sum;
  short_sum.push_back({{0, 0}, 0.5});
  short_sum.push_back({{1, 0}, 0.4999999999});
  short_sum.push_back({{2, 0}, 0.0});
  CHECK(sample_target(short_sum, 0.99999999999) == Cell{1, 0});
}
