#pragma once

#include <cstdint>
#include <vector>

#include "navbench/geometry.hpp"

namespace navbench {

/// Rasterized world map. Cell (0,0) has its lower-left corner at `origin`
/// (origin.theta must be 0; rotated maps are not supported). Row-major,
/// out-of-bounds queries read as occupied.
struct OccupancyGrid {
  double resolution = 0.05;  // meters / cell
  int width = 0;             // cells
  int height = 0;            // cells
  Pose2D origin;
  std::vector<std::uint8_t> cells;

  static OccupancyGrid make(double resolution, int width, int height, const Pose2D& origin);

  bool in_bounds(int ix, int iy) const { return ix >= 0 && iy >= 0 && ix < width && iy < height; }

  bool occupied(int ix, int iy) const {
    if (!in_bounds(ix, iy)) {
      return true;
    }
    return cells[static_cast<std::size_t>(iy) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(ix)] != 0;
  }

  void set(int ix, int iy, bool value) {
    if (in_bounds(ix, iy)) {
      cells[static_cast<std::size_t>(iy) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(ix)] = value ? 1 : 0;
    }
  }

  Vec2 cell_center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * resolution, origin.y + (iy + 0.5) * resolution};
  }

  /// False when p lies outside the map.
  bool world_to_cell(const Vec2& p, int& ix, int& iy) const;

  bool operator==(const OccupancyGrid& o) const = default;
};

}  // namespace navbench
