#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffsim/util.hpp"

namespace ffsim {

/// Lattice cell in exit-centred coordinates: x is the distance in cells from
/// the exit wall along the direction of travel (exit column is x = 0, the
/// entrance wall is x = length-1), y is the signed offset from the exit row.
/// The exit cell itself is (0, 0).
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline bool is_diagonal_step(Cell from, Cell to) {
  return (from.x - to.x) != 0 && (from.y - to.y) != 0;
}

/// Rectangular room with one exit cell on the short wall at x = 0 and the
/// entrance cells on the opposite wall.
struct LatticeGeometry {
  int length = 18;       // cells along the direction of travel
  int width = 11;        // cells across
  double cell_size = 0.4;  // metres per cell edge
  int exit_row = 5;      // row index of the exit within its column, 0-based
  std::vector<int> entrance_rows = default_entrance_rows(11);  // rows on the far wall

  static std::vector<int> default_entrance_rows(int width) {
    std::vector<int> rows(static_cast<std::size_t>(width));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
  }

  friend bool operator==(const LatticeGeometry&, const LatticeGeometry&) = default;

  Cell exit_cell() const { return {0, 0}; }

  int y_of_row(int row) const { return row - exit_row; }
  int row_of_y(int y) const { return y + exit_row; }
  int y_min() const { return -exit_row; }
  int y_max() const { return width - 1 - exit_row; }

  bool contains(Cell c) const {
    return c.x >= 0 && c.x < length && c.y >= y_min() && c.y <= y_max();
  }

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.x) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(row_of_y(c.y));
  }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(length) * static_cast<std::size_t>(width);
  }

  std::vector<Cell> entrance_cells() const {
    std::vector<Cell> cells;
    cells.reserve(entrance_rows.size());
    for (int row : entrance_rows) cells.push_back({length - 1, y_of_row(row)});
    return cells;
  }

  double room_length_m() const { return length * cell_size; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const {
    if (length < 2) throw std::invalid_argument("lattice.length must be >= 2");
    if (width < 1) throw std::invalid_argument("lattice.width must be >= 1");
    if (!(cell_size > 0.0)) throw std::invalid_argument("lattice.cell_size must be > 0");
    if (exit_row < 0 || exit_row >= width)
      throw std::invalid_argument("lattice.exit_row must lie in [0, width)");
    if (entrance_rows.empty())
      throw std::invalid_argument("lattice.entrance_rows must not be empty");
    std::vector<int> sorted = entrance_rows;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] < 0 || sorted[i] >= width)
        throw std::invalid_argument("lattice.entrance_rows entries must lie in [0, width)");
      if (i > 0 && sorted[i] == sorted[i - 1])
        throw std::invalid_argument("lattice.entrance_rows entries must be unique");
    }
  }
};

/// Euclidean distance of every cell to the exit cell, in cell units.
/// The driving field of the movement kernel: lower values attract.
class StaticField {
 public:
  StaticField() = default;
  StaticField(const LatticeGeometry& geom, std::vector<double> values)
      : geom_(geom), values_(std::move(values)) {}

  double at(Cell c) const { return values_[geom_.index(c)]; }
  const LatticeGeometry& geometry() const { return geom_; }

 private:
  LatticeGeometry geom_;
  std::vector<double> values_;
};

inline StaticField build_static_field(const LatticeGeometry& geom) {
  geom.validate();
  std::vector<double> values(geom.cell_count());
  for (int x = 0; x < geom.length; ++x) {
    for (int y = geom.y_min(); y <= geom.y_max(); ++y) {
      Cell c{x, y};
      values[geom.index(c)] = std::sqrt(static_cast<double>(x) * x +
                                        static_cast<double>(y) * y);
    }
  }
  return StaticField(geom, std::move(values));
}

}  // namespace ffsim
