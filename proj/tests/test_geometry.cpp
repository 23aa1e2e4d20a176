#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "ffsim/geometry.hpp"

using namespace ffsim;

TEST_CASE("default lattice matches the standard scenario", "[geometry]") {
  LatticeGeometry g;
  CHECK(g.length == 18);
  CHECK(g.width == 11);
  CHECK(g.cell_size == 0.4);
  CHECK(g.exit_row == 5);
  CHECK(g.exit_cell() == Cell{0, 0});
  CHECK(g.cell_count() == 198);
  CHECK(g.room_length_m() == Catch::Approx(7.2).margin(1e-12));
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("row and y coordinates are inverse maps", "[geometry]") {
  LatticeGeometry g;
  CHECK(g.y_min() == -5);
  CHECK(g.y_max() == 5);
  for (int row = 0; row < g.width; ++row) CHECK(g.row_of_y(g.y_of_row(row)) == row);
  CHECK(g.y_of_row(g.exit_row) == 0);
}

TEST_CASE("contains matches the rectangle", "[geometry]") {
  LatticeGeometry g;
  CHECK(g.contains({0, 0}));
  CHECK(g.contains({17, 5}));
  CHECK(g.contains({17, -5}));
  CHECK_FALSE(g.contains({-1, 0}));
  CHECK_FALSE(g.contains({18, 0}));
  CHECK_FALSE(g.contains({0, 6}));
  CHECK_FALSE(g.contains({0, -6}));
}

TEST_CASE("index is a bijection over the lattice", "[geometry]") {
  LatticeGeometry g;
  std::set<std::size_t> seen;
  for (int x = 0; x < g.length; ++x)
    for (int y = g.y_min(); y <= g.y_max(); ++y) {
      std::size_t i = g.index({x, y});
      CHECK(i < g.cell_count());
      CHECK(seen.insert(i).second);
    }
  CHECK(seen.size() == g.cell_count());
}

TEST_CASE("entrance cells sit on the far wall, one per row", "[geometry]") {
  LatticeGeometry g;
  auto cells = g.entrance_cells();
  REQUIRE(cells.size() == 11);
  std::set<int> ys;
  for (Cell c : cells) {
    CHECK(c.x == g.length - 1);
    ys.insert(c.y);
  }
  CHECK(ys == std::set<int>{-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5});
}

TEST_CASE("is_diagonal_step distinguishes the eight directions", "[geometry]") {
  CHECK_FALSE(is_diagonal_step({3, 3}, {2, 3}));
  CHECK_FALSE(is_diagonal_step({3, 3}, {3, 2}));
  CHECK(is_diagonal_step({3, 3}, {2, 2}));
  CHECK(is_diagonal_step({3, 3}, {4, 2}));
  CHECK_FALSE(is_diagonal_step({3, 3}, {3, 3}));
}

TEST_CASE("static field is the Euclidean distance to the exit", "[geometry]") {
  LatticeGeometry g;
  StaticField f = build_static_field(g);
  CHECK(f.at({0, 0}) == 0.0);
  CHECK(f.at({1, 0}) == 1.0);
  CHECK(f.at({0, 3}) == 3.0);
  CHECK(f.at({3, 4}) == 5.0);
  CHECK(f.at({1, 1}) == std::sqrt(2.0));
  CHECK(f.at({17, -5}) == std::sqrt(17.0 * 17.0 + 25.0));
}

TEST_CASE("validate names the offending field", "[geometry]") {
  LatticeGeometry g;
  g.length = 1;
  CHECK_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("length"));
  g = LatticeGeometry{};
  g.cell_size = 0.0;
  CHECK_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("cell_size"));
  g = LatticeGeometry{};
  g.exit_row = 11;
  CHECK_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("exit_row"));
  g = LatticeGeometry{};
  g.entrance_rows = {};
  CHECK_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("entrance_rows"));
  g.entrance_rows = {0, 0};
  CHECK_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("unique"));
  g.entrance_rows = {11};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
