#include "navbench/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "navbench/errors.hpp"

namespace navbench {

Vec2 GlobalPath::point_at(double s) const {
  return pose_at(s).position();
}

Pose2D GlobalPath::pose_at(double s) const {
  if (waypoints.empty()) {
    return {};
  }
  if (waypoints.size() == 1 || s <= 0.0) {
    return waypoints.front();
  }
  if (s >= cumulative.back()) {
    return waypoints.back();
  }
  std::size_t i = 1;
  while (i + 1 < cumulative.size() && cumulative[i] < s) {
    ++i;
  }
  const double seg = cumulative[i] - cumulative[i - 1];
  const double t = seg > 0.0 ? (s - cumulative[i - 1]) / seg : 0.0;
  const Vec2 p = waypoints[i - 1].position() + (waypoints[i].position() - waypoints[i - 1].position()) * t;
  return {p.x, p.y, waypoints[i - 1].theta};
}

double GlobalPath::nearest_arclength(const Vec2& p) const {
  double best_d = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Vec2 a = waypoints[i - 1].position();
    const Vec2 b = waypoints[i].position();
    const Vec2 ab = b - a;
    const double len_sq = ab.squared_norm();
    const double t = len_sq > 0.0 ? std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0) : 0.0;
    const Vec2 q = a + ab * t;
    const double d = (p - q).norm();
    if (d < best_d) {
      best_d = d;
      best_s = cumulative[i - 1] + t * std::sqrt(len_sq);
    }
  }
  if (waypoints.size() == 1) {
    return 0.0;
  }
  return best_s;
}

double GlobalPath::distance_to(const Vec2& p) const {
  if (waypoints.empty()) {
    return 0.0;
  }
  if (waypoints.size() == 1) {
    return (p - waypoints.front().position()).norm();
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Vec2 a = waypoints[i - 1].position();
    const Vec2 b = waypoints[i].position();
    const Vec2 ab = b - a;
    const double len_sq = ab.squared_norm();
    const double t = len_sq > 0.0 ? std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0) : 0.0;
    best = std::min(best, (p - (a + ab * t)).norm());
  }
  return best;
}

std::vector<Vec2> GlobalPath::positions() const {
  std::vector<Vec2> out;
  out.reserve(waypoints.size());
  for (const auto& w : waypoints) {
    out.push_back(w.position());
  }
  return out;
}

GlobalPath GlobalPath::from_waypoints(std::vector<Pose2D> wps) {
  GlobalPath p;
  p.waypoints = std::move(wps);
  p.cumulative.resize(p.waypoints.size(), 0.0);
  for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
    p.cumulative[i] = p.cumulative[i - 1] +
                      (p.waypoints[i].position() - p.waypoints[i - 1].position()).norm();
  }
  return p;
}

OccupancyGrid inflate(const OccupancyGrid& map, double radius) {
  if (radius <= 0.0) {
    return map;
  }
  OccupancyGrid out = map;
  const int r_cells = static_cast<int>(std::floor(radius / map.resolution));
  const double r_sq = radius * radius;
  for (int iy = 0; iy < map.height; ++iy) {
    for (int ix = 0; ix < map.width; ++ix) {
      if (!map.occupied(ix, iy)) {
        continue;
      }
      for (int dy = -r_cells; dy <= r_cells; ++dy) {
        for (int dx = -r_cells; dx <= r_cells; ++dx) {
          const double d_sq = (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) *
                              map.resolution * map.resolution;
          if (d_sq <= r_sq) {
            out.set(ix + dx, iy + dy, true);
          }
        }
      }
    }
  }
  return out;
}

bool line_of_sight(const OccupancyGrid& map, const Vec2& a, const Vec2& b) {
  // Amanatides-Woo traversal in grid coordinates; on exact corner crossings
  // both side cells get visited, which keeps the check conservative.
  const double res = map.resolution;
  double x0 = (a.x - map.origin.x) / res;
  double y0 = (a.y - map.origin.y) / res;
  double x1 = (b.x - map.origin.x) / res;
  double y1 = (b.y - map.origin.y) / res;

  int ix = static_cast<int>(std::floor(x0));
  int iy = static_cast<int>(std::floor(y0));
  const int gx = static_cast<int>(std::floor(x1));
  const int gy = static_cast<int>(std::floor(y1));

  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);

  double t_max_x = std::numeric_limits<double>::infinity();
  double t_max_y = std::numeric_limits<double>::infinity();
  double t_delta_x = std::numeric_limits<double>::infinity();
  double t_delta_y = std::numeric_limits<double>::infinity();
  if (step_x != 0) {
    const double next_x = step_x > 0 ? std::floor(x0) + 1.0 : std::floor(x0);
    t_max_x = (next_x - x0) / dx;
    t_delta_x = 1.0 / std::abs(dx);
  }
  if (step_y != 0) {
    const double next_y = step_y > 0 ? std::floor(y0) + 1.0 : std::floor(y0);
    t_max_y = (next_y - y0) / dy;
    t_delta_y = 1.0 / std::abs(dy);
  }

  if (map.occupied(ix, iy)) {
    return false;
  }
  int guard = 4 * (map.width + map.height) + 8;
  while ((ix != gx || iy != gy) && guard-- > 0) {
    if (std::abs(t_max_x - t_max_y) < 1e-12) {
      // Corner crossing: check both side cells before stepping diagonally.
      if (map.occupied(ix + step_x, iy) || map.occupied(ix, iy + step_y)) {
        return false;
      }
      ix += step_x;
      iy += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      ix += step_x;
      t_max_x += t_delta_x;
    } else {
      iy += step_y;
      t_max_y += t_delta_y;
    }
    if (map.occupied(ix, iy)) {
      return false;
    }
  }
  return guard > 0;
}

namespace {

struct Node {
  long long f;
  long long g;
  int idx;
  bool operator>(const Node& o) const {
    return std::tie(f, g, idx) > std::tie(o.f, o.g, o.idx);
  }
};

long long octile(int dx, int dy) {
  dx = std::abs(dx);
  dy = std::abs(dy);
  const int lo = std::min(dx, dy);
  const int hi = std::max(dx, dy);
  return kCostDiagonal * lo + kCostAxial * (hi - lo);
}

/// A* over the inflated grid; fills `parent` when provided.
long long grid_search(const OccupancyGrid& map, int sx, int sy, int gx, int gy,
                      std::vector<int>* parent, bool use_heuristic) {
  const int w = map.width;
  const int h = map.height;
  const auto id = [w](int x, int y) { return y * w + x; };
  const long long inf = std::numeric_limits<long long>::max();
  std::vector<long long> g_cost(static_cast<std::size_t>(w) * h, inf);
  if (parent) {
    parent->assign(static_cast<std::size_t>(w) * h, -1);
  }
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
  g_cost[id(sx, sy)] = 0;
  open.push({use_heuristic ? octile(gx - sx, gy - sy) : 0, 0, id(sx, sy)});

  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const Node n = open.top();
    open.pop();
    const int cx = n.idx % w;
    const int cy = n.idx / w;
    if (n.g > g_cost[n.idx]) {
      continue;
    }
    if (cx == gx && cy == gy) {
      return n.g;
    }
    for (int k = 0; k < 8; ++k) {
      const int nx = cx + kDx[k];
      const int ny = cy + kDy[k];
      if (!map.in_bounds(nx, ny) || map.occupied(nx, ny)) {
        continue;
      }
      // No corner cutting on diagonal moves.
      if (k >= 4 && (map.occupied(cx + kDx[k], cy) || map.occupied(cx, cy + kDy[k]))) {
        continue;
      }
      const long long step = k < 4 ? kCostAxial : kCostDiagonal;
      const long long ng = n.g + step;
      const int nid = id(nx, ny);
      if (ng < g_cost[nid]) {
        g_cost[nid] = ng;
        if (parent) {
          (*parent)[nid] = n.idx;
        }
        const long long f = use_heuristic ? ng + octile(gx - nx, gy - ny) : ng;
        open.push({f, ng, nid});
      }
    }
  }
  return -1;
}

}  // namespace

long long astar_cost(const OccupancyGrid& inflated, int sx, int sy, int gx, int gy) {
  if (!inflated.in_bounds(sx, sy) || inflated.occupied(sx, sy) || !inflated.in_bounds(gx, gy) ||
      inflated.occupied(gx, gy)) {
    return -1;
  }
  return grid_search(inflated, sx, sy, gx, gy, nullptr, true);
}

GlobalPath plan(const OccupancyGrid& map, const Pose2D& start, const Pose2D& goal,
                const RobotSpec& spec) {
  const double radius = spec.footprint_radius + 0.05;
  const OccupancyGrid inflated = inflate(map, radius);

  int sx = 0, sy = 0, gx = 0, gy = 0;
  if (!inflated.world_to_cell(start.position(), sx, sy)) {
    throw NoPath("plan: start outside the map");
  }
  if (!inflated.world_to_cell(goal.position(), gx, gy)) {
    throw NoPath("plan: goal outside the map");
  }
  if (inflated.occupied(gx, gy)) {
    throw NoPath("plan: goal blocked on the inflated map");
  }
  if (inflated.occupied(sx, sy)) {
    // The robot can legitimately sit inside the inflation ring after
    // dodging an obstacle; snap to the nearest free cell nearby.
    const int max_r = static_cast<int>(std::ceil(2.0 * spec.footprint_radius / map.resolution));
    long long best_d = std::numeric_limits<long long>::max();
    int bx = sx, by = sy;
    for (int dy = -max_r; dy <= max_r; ++dy) {
      for (int dx = -max_r; dx <= max_r; ++dx) {
        const int nx = sx + dx;
        const int ny = sy + dy;
        if (!inflated.in_bounds(nx, ny) || inflated.occupied(nx, ny)) {
          continue;
        }
        const long long d = static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy;
        if (d < best_d) {
          best_d = d;
          bx = nx;
          by = ny;
        }
      }
    }
    if (best_d == std::numeric_limits<long long>::max()) {
      throw NoPath("plan: start blocked on the inflated map");
    }
    sx = bx;
    sy = by;
  }

  std::vector<int> parent;
  const long long cost = grid_search(inflated, sx, sy, gx, gy, &parent, true);
  if (cost < 0) {
    throw NoPath("plan: goal unreachable");
  }

  std::vector<std::pair<int, int>> cells;
  for (int idx = gy * inflated.width + gx; idx >= 0; idx = parent[idx]) {
    cells.push_back({idx % inflated.width, idx / inflated.width});
    if (cells.size() > inflated.cells.size()) {
      throw NoPath("plan: cyclic parent chain");
    }
    if (cells.back().first == sx && cells.back().second == sy) {
      break;
    }
  }
  std::reverse(cells.begin(), cells.end());

  // Greedy farthest-visible shortcutting over cell centers.
  std::vector<Vec2> pts;
  std::size_t i = 0;
  pts.push_back(inflated.cell_center(cells[0].first, cells[0].second));
  while (i + 1 < cells.size()) {
    std::size_t best = i + 1;
    for (std::size_t j = cells.size() - 1; j > i + 1; --j) {
      if (line_of_sight(inflated, inflated.cell_center(cells[i].first, cells[i].second),
                        inflated.cell_center(cells[j].first, cells[j].second))) {
        best = j;
        break;
      }
    }
    pts.push_back(inflated.cell_center(cells[best].first, cells[best].second));
    i = best;
  }

  std::vector<Pose2D> wps;
  wps.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double heading = goal.theta;
    if (k + 1 < pts.size()) {
      const Vec2 d = pts[k + 1] - pts[k];
      heading = std::atan2(d.y, d.x);
    }
    wps.push_back({pts[k].x, pts[k].y, heading});
  }
  return GlobalPath::from_waypoints(std::move(wps));
}

}  // namespace navbench
