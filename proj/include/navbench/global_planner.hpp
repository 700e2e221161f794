#pragma once

#include <vector>

#include "navbench/geometry.hpp"
#include "navbench/grid.hpp"

namespace navbench {

/// Coarse geometric path from the global planner: ordered waypoints with
/// headings pointing at the next waypoint (final heading = goal heading).
struct GlobalPath {
  std::vector<Pose2D> waypoints;
  std::vector<double> cumulative;  // arc length at each waypoint

  double length() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  std::size_t size() const { return waypoints.size(); }
  bool empty() const { return waypoints.empty(); }

  Vec2 point_at(double s) const;
  Pose2D pose_at(double s) const;
  /// Arc length of the point on the path nearest to p.
  double nearest_arclength(const Vec2& p) const;
  /// Distance from p to the nearest point on the path polyline.
  double distance_to(const Vec2& p) const;
  std::vector<Vec2> positions() const;

  static GlobalPath from_waypoints(std::vector<Pose2D> wps);
};

/// Marks every free cell whose center lies within `radius` of an occupied
/// cell's center as occupied.
OccupancyGrid inflate(const OccupancyGrid& map, double radius);

/// True when the segment a-b stays out of occupied cells. Conservative
/// supercover traversal: every cell the segment passes through is checked.
bool line_of_sight(const OccupancyGrid& map, const Vec2& a, const Vec2& b);

/// 8-connected A* on the inflated map (octile heuristic), then greedy
/// farthest-visible-waypoint shortcutting. Waypoints sit at cell centers.
/// Throws NoPath when the goal is unreachable. A start cell that is only
/// blocked by inflation is snapped to the nearest free cell within two
/// footprint radii, so re-planning works from poses near obstacles.
GlobalPath plan(const OccupancyGrid& map, const Pose2D& start, const Pose2D& goal,
                const RobotSpec& spec);

/// Integer step costs shared by the A* implementation and test oracles
/// (axial/diagonal), in thousandths of a cell.
inline constexpr long long kCostAxial = 1000;
inline constexpr long long kCostDiagonal = 1414;

/// Optimal grid cost between two cells on the already-inflated map, or -1
/// when unreachable. Exposed so search equivalence can be checked.
long long astar_cost(const OccupancyGrid& inflated, int sx, int sy, int gx, int gy);

}  // namespace navbench
