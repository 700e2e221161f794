#pragma once

#include <cmath>
#include <vector>

namespace navbench {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// 3D position in meters (end-effector poses live here).
using Point3 = Vec3;

/// Planar base configuration. theta is kept normalized in (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
};

/// Commanded base velocities, linear (m/s) and angular (rad/s), both signed.
struct Twist {
  double v = 0.0;
  double omega = 0.0;
};

/// Kinematic and dynamic limits of the simulated base, plus the nominal
/// base->end-effector mount translation used when no schedule overrides it.
struct RobotSpec {
  double v_max = 1.0;             // m/s
  double v_min = 0.0;             // m/s (0 = no reverse)
  double omega_max = 1.5;         // rad/s
  double a_lin_max = 1.0;         // m/s^2
  double a_ang_max = 2.0;         // rad/s^2
  double footprint_radius = 0.3;  // m, disc footprint
  Vec3 mount_offset{0.25, 0.0, 1.0};
};

/// Shared goal-reached tolerance, used by the harness and both planners.
struct GoalTolerance {
  double position = 0.15;  // m
  double heading = 0.2;    // rad
};

/// Segments shorter than this are treated as degenerate and skipped in
/// angle chains (a stationary robot produces zero-length steps).
inline constexpr double kSegmentEpsilon = 1e-9;

/// Wraps an angle into (-pi, pi]. Idempotent.
double normalize_angle(double a);

/// Rigid-body composition a*b with normalized heading.
Pose2D compose(const Pose2D& a, const Pose2D& b);

/// Inverse pose: compose(p, inverse(p)) is the identity.
Pose2D inverse(const Pose2D& p);

/// Angle between two non-degenerate vectors, in [0, pi].
/// Normalizes first, then takes arccos of the clamped dot product.
/// Throws DegenerateSegment if either vector is shorter than kSegmentEpsilon.
double angle_between(const Vec2& u, const Vec2& v);

double polyline_length(const std::vector<Vec2>& pts);

/// Resamples a polyline to m points uniformly spaced in arc length,
/// endpoints included. A degenerate (zero-length) polyline yields m copies
/// of its first point.
std::vector<Vec2> resample_polyline(const std::vector<Vec2>& pts, int m);

}  // namespace navbench
