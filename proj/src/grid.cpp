#include "navbench/grid.hpp"

#include <cmath>

namespace navbench {

OccupancyGrid OccupancyGrid::make(double resolution, int width, int height, const Pose2D& origin) {
  OccupancyGrid g;
  g.resolution = resolution;
  g.width = width;
  g.height = height;
  g.origin = origin;
  g.cells.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  return g;
}

bool OccupancyGrid::world_to_cell(const Vec2& p, int& ix, int& iy) const {
  ix = static_cast<int>(std::floor((p.x - origin.x) / resolution));
  iy = static_cast<int>(std::floor((p.y - origin.y) / resolution));
  return in_bounds(ix, iy);
}

}  // namespace navbench
