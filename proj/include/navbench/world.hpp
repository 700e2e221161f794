#pragma once

#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "navbench/geometry.hpp"
#include "navbench/grid.hpp"

namespace navbench {

// Fixed simulation rates: 10 physics steps per control step.
inline constexpr double kDtSim = 0.01;
inline constexpr double kDtControl = 0.1;

struct Circle {
  Vec2 center;
  double radius = 0.5;
};

struct Rect {
  Vec2 min;
  Vec2 max;
};

/// World obstacle. `mapped` controls whether it is rasterized into the map
/// handed to the global planner; unmapped obstacles are only visible to the
/// range sensor. A velocity makes it a constant-velocity mover.
struct Obstacle {
  std::variant<Circle, Rect> shape;
  bool mapped = true;
  std::optional<Vec2> velocity;

  /// Signed distance from p to the obstacle boundary (negative inside).
  double signed_distance(const Vec2& p) const;
  void translate(const Vec2& d);
};

struct SensorSpec {
  int ray_count = 360;
  double max_range = 10.0;
  double noise_std = 0.0;  // meters, 0 = deterministic
};

struct RangeScan {
  std::vector<double> angles;  // rad, relative to base heading
  std::vector<double> ranges;  // m, in (0, max_range]
  double max_range = 10.0;
};

struct ArmKeyframe {
  double t = 0.0;
  Vec3 offset;  // base frame -> end-effector translation
};

/// Compliant end-effector model: a point load of mass m attached to the
/// scheduled mount point by a spring (k) and a damper (c) acting on the
/// relative velocity, so constant base velocity leaves no steady-state error.
struct ArmModel {
  std::vector<ArmKeyframe> schedule{{0.0, {0.25, 0.0, 1.0}}};
  double stiffness = 400.0;  // N/m
  double damping = 18.0;     // N*s/m
  double mass = 5.0;         // kg

  /// Piecewise-linear interpolation of the keyframes, clamped at the ends.
  Vec3 offset_at(double t) const;
  bool underdamped() const { return damping * damping < 4.0 * stiffness * mass; }
};

struct WorldState {
  double time = 0.0;
  Pose2D base;
  Twist twist;  // realized twist after acceleration clamping
  std::vector<Obstacle> obstacles;
  Point3 ee_actual;
  Vec3 ee_velocity;
  Point3 ee_anchor;  // expected point at the previous arm step
  bool collided = false;
};

/// WorldState with the load resting at its expected point.
WorldState init_state(const Pose2D& base, std::vector<Obstacle> obstacles, const ArmModel& arm);

/// Advances the base by one fixed step: the command is clamped to the
/// velocity limits and to what the accelerations allow from the current
/// twist, then integrated as an exact constant-twist arc. Moving obstacles
/// advance by velocity*dt and the footprint disc is collision-checked
/// against every obstacle at the post-step pose.
WorldState step_base(WorldState s, const Twist& cmd, const RobotSpec& spec, double dt);

/// Advances the compliant load by one semi-implicit Euler step toward
/// expected_ee(state.base, arm, state.time).
WorldState step_arm(WorldState s, const ArmModel& arm, double dt);

/// Kinematic (no dynamics) end-effector position: the scheduled mount
/// offset rigidly transformed by the base pose.
Point3 expected_ee(const Pose2D& base, const ArmModel& arm, double t);

/// Ray-cast range scan from the base pose against all obstacles.
RangeScan scan(const WorldState& s, const SensorSpec& sensor);
RangeScan scan(const WorldState& s, const SensorSpec& sensor, std::mt19937_64& rng);

/// World-frame positions of the rays that hit something.
std::vector<Vec2> scan_hit_points(const RangeScan& scan, const Pose2D& base);

/// Bucket grid over a 2D point set for capped nearest-distance queries.
class PointIndex {
 public:
  PointIndex() = default;
  explicit PointIndex(std::vector<Vec2> points, double cell_size = 0.5);

  /// Minimum distance from p to any indexed point, or `cap` when every
  /// point is at least `cap` away.
  double min_distance(const Vec2& p, double cap) const;

  bool empty() const { return points_.empty(); }
  const std::vector<Vec2>& points() const { return points_; }

 private:
  std::vector<Vec2> points_;
  double cell_ = 0.5;
  Vec2 min_;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> buckets_;
};

/// Rasterizes obstacles into a grid: a cell is occupied when its center is
/// inside (or on the boundary of) any obstacle. With mapped_only, unmapped
/// obstacles are left out — this is the map handed to the planner.
OccupancyGrid rasterize(const std::vector<Obstacle>& obstacles, const Vec2& origin, double width_m,
                        double height_m, double resolution, bool mapped_only);

}  // namespace navbench
