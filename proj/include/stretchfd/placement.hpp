#pragma once

#include <vector>

#include "stretchfd/gridgen.hpp"

namespace stretchfd {

enum class PlacementMode { None, Insert, Deform };

struct PlacementTarget {
  double value;
  PlacementGoal goal = PlacementGoal::MidCell;
};

struct PlacementSpec {
  PlacementMode mode = PlacementMode::None;
  std::vector<PlacementTarget> targets;

  /// Targets sorted, distinct and strictly inside the grid bounds.
  void validate(const Grid& grid) const;
};

/// Insert one node per MidCell target so that the target sits exactly in the
/// middle of its cell. A target already in the middle leaves the grid as is;
/// a target sitting on a node replaces that node by a symmetric pair. OnGrid
/// targets are inserted as nodes.
Grid insert_points(const Grid& grid, const PlacementSpec& spec);

/// Move every node through a monotone C1 deformation of the index space so
/// that MidCell targets fall in the middle of a cell and OnGrid targets on a
/// node. The grid size and endpoints are preserved.
Grid deform_smooth(const Grid& grid, const PlacementSpec& spec);

/// Dispatch on spec.mode.
Grid apply_placement(const Grid& grid, const PlacementSpec& spec);

}  // namespace stretchfd
