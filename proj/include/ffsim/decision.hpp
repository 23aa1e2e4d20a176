#pragma once

#include <cmath>

#include "ffsim/geometry.hpp"
#include "ffsim/util.hpp"

namespace ffsim {

/// One candidate target as the deciding agent sees it.
struct ViewCell {
  Cell cell;
  double field = 0.0;    // static field value at the cell
  bool occupied = false; // holds another agent right now
  bool diagonal = false; // reaching it from the origin is a diagonal step
};

/// The Moore neighbourhood of the deciding agent, own cell included. Wall
/// cells are absent entirely; they get no probability mass. Cells are kept
/// in ascending (x, y) order so the sampling scan is deterministic.
struct NeighborhoodView {
  Cell origin;
  InlineVec<ViewCell, 9> cells;
};

/// Collects the in-lattice Moore neighbourhood of origin. occupied(cell) must
/// say whether the cell holds an agent other than the deciding one; it is
/// never asked about the origin.
template <typename OccupiedFn>
NeighborhoodView build_view(const StaticField& field, Cell origin, OccupiedFn&& occupied) {
  const LatticeGeometry& geom = field.geometry();
  NeighborhoodView view;
  view.origin = origin;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      Cell c{origin.x + dx, origin.y + dy};
      if (!geom.contains(c)) continue;
      ViewCell vc;
      vc.cell = c;
      vc.field = field.at(c);
      vc.occupied = (c == origin) ? false : static_cast<bool>(occupied(c));
      vc.diagonal = dx != 0 && dy != 0;
      view.cells.push_back(vc);
    }
  }
  return view;
}

struct TargetProbability {
  Cell cell;
  double probability = 0.0;
};

/// Probabilities in the same ascending (x, y) order as the view.
using TargetDistribution = InlineVec<TargetProbability, 9>;

/// Movement kernel. Each visible cell y gets weight
///
///   exp(-k_s * S(y)) * (1 - k_o * occupied(y)) * (1 - k_d * diagonal(y)),
///
/// normalized over the view. The own cell always has positive weight (it is
/// neither occupied in this sense nor diagonal), so the distribution is
/// well defined even when every neighbour is occupied and k_o = 1.
///
/// Weights are computed relative to the smallest field value in the view;
/// the shift cancels in the normalization and keeps exponents order one.
inline TargetDistribution target_distribution(const NeighborhoodView& view,
                                              double k_s, double k_o, double k_d) {
  FFSIM_CHECK(!view.cells.empty(), "empty neighbourhood view");
  double field_min = view.cells[0].field;
  for (const ViewCell& vc : view.cells) field_min = std::min(field_min, vc.field);

  TargetDistribution dist;
  long double total = 0.0L;
  for (const ViewCell& vc : view.cells) {
    double w = std::exp(-k_s * (vc.field - field_min));
    if (vc.occupied) w *= 1.0 - k_o;
    if (vc.diagonal) w *= 1.0 - k_d;
    dist.push_back({vc.cell, w});
    total += w;
  }
  FFSIM_CHECK(total > 0.0L, "movement kernel lost all probability mass");
  for (TargetProbability& tp : dist)
    tp.probability = static_cast<double>(tp.probability / total);
  return dist;
}

/// Maps one uniform draw u in [0, 1) to a target cell by scanning the
/// cumulative distribution. Falls back to the last cell with positive
/// probability if rounding left the cumulative sum short of 1.
inline Cell sample_target(const TargetDistribution& dist, double u) {
  FFSIM_CHECK(!dist.empty(), "empty target distribution");
  double cum = 0.0;
  for (const TargetProbability& tp : dist) {
    cum += tp.probability;
    if (u < cum) return tp.cell;
  }
  for (std::size_t i = dist.size(); i-- > 0;)
    if (dist[i].probability > 0.0) return dist[i].cell;
  return dist[dist.size() - 1].cell;
}

}  // namespace ffsim
