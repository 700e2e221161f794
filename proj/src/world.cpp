#include "navbench/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navbench {
namespace {

double circle_distance(const Circle& c, const Vec2& p) { return (p - c.center).norm() - c.radius; }

double rect_distance(const Rect& r, const Vec2& p) {
  const double qx = std::max(r.min.x - p.x, p.x - r.max.x);
  const double qy = std::max(r.min.y - p.y, p.y - r.max.y);
  if (qx > 0.0 || qy > 0.0) {
    return std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  }
  return std::max(qx, qy);  // negative: depth to the nearest face
}

/// Nearest intersection parameter t >= 0 of ray o + t*d (d unit) with the
/// obstacle, or nullopt. A ray starting inside reports the exit distance.
std::optional<double> ray_hit(const Obstacle& ob, const Vec2& o, const Vec2& d) {
  if (const auto* c = std::get_if<Circle>(&ob.shape)) {
    const Vec2 m = o - c->center;
    const double b = dot(m, d);
    const double cc = m.squared_norm() - c->radius * c->radius;
    const double disc = b * b - cc;
    if (disc < 0.0) {
      return std::nullopt;
    }
    const double root = std::sqrt(disc);
    const double t0 = -b - root;
    const double t1 = -b + root;
    if (t1 < 0.0) {
      return std::nullopt;
    }
    return t0 >= 0.0 ? t0 : t1;
  }
  const auto& r = std::get<Rect>(ob.shape);
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  const double o_arr[2] = {o.x, o.y};
  const double d_arr[2] = {d.x, d.y};
  const double lo[2] = {r.min.x, r.min.y};
  const double hi[2] = {r.max.x, r.max.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d_arr[axis]) < 1e-12) {
      if (o_arr[axis] < lo[axis] || o_arr[axis] > hi[axis]) {
        return std::nullopt;
      }
      continue;
    }
    double t0 = (lo[axis] - o_arr[axis]) / d_arr[axis];
    double t1 = (hi[axis] - o_arr[axis]) / d_arr[axis];
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) {
      return std::nullopt;
    }
  }
  if (t_far < 0.0) {
    return std::nullopt;
  }
  return t_near >= 0.0 ? t_near : t_far;
}

}  // namespace

double Obstacle::signed_distance(const Vec2& p) const {
  if (const auto* c = std::get_if<Circle>(&shape)) {
    return circle_distance(*c, p);
  }
  return rect_distance(std::get<Rect>(shape), p);
}

void Obstacle::translate(const Vec2& d) {
  if (auto* c = std::get_if<Circle>(&shape)) {
    c->center = c->center + d;
  } else {
    auto& r = std::get<Rect>(shape);
    r.min = r.min + d;
    r.max = r.max + d;
  }
}

Vec3 ArmModel::offset_at(double t) const {
  if (schedule.empty()) {
    return {};
  }
  if (t <= schedule.front().t || schedule.size() == 1) {
    return schedule.front().offset;
  }
  if (t >= schedule.back().t) {
    return schedule.back().offset;
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (t <= schedule[i].t) {
      const double span = schedule[i].t - schedule[i - 1].t;
      const double a = span > 0.0 ? (t - schedule[i - 1].t) / span : 1.0;
      return schedule[i - 1].offset + (schedule[i].offset - schedule[i - 1].offset) * a;
    }
  }
  return schedule.back().offset;
}

WorldState step_base(WorldState s, const Twist& cmd, const RobotSpec& spec, double dt) {
  double v = std::clamp(cmd.v, spec.v_min, spec.v_max);
  double w = std::clamp(cmd.omega, -spec.omega_max, spec.omega_max);
  v = std::clamp(v, s.twist.v - spec.a_lin_max * dt, s.twist.v + spec.a_lin_max * dt);
  w = std::clamp(w, s.twist.omega - spec.a_ang_max * dt, s.twist.omega + spec.a_ang_max * dt);

  Pose2D p = s.base;
  if (std::abs(w) < 1e-9) {
    p.x += v * dt * std::cos(p.theta);
    p.y += v * dt * std::sin(p.theta);
  } else {
    const double th1 = p.theta + w * dt;
    p.x += v / w * (std::sin(th1) - std::sin(p.theta));
    p.y -= v / w * (std::cos(th1) - std::cos(p.theta));
    p.theta = th1;
  }
  p.theta = normalize_angle(p.theta);

  for (auto& ob : s.obstacles) {
    if (ob.velocity) {
      ob.translate(*ob.velocity * dt);
    }
  }

  s.base = p;
  s.twist = {v, w};
  s.time += dt;
  for (const auto& ob : s.obstacles) {
    if (ob.signed_distance(p.position()) <= spec.footprint_radius) {
      s.collided = true;
      break;
    }
  }
  return s;
}

Point3 expected_ee(const Pose2D& base, const ArmModel& arm, double t) {
  const Vec3 off = arm.offset_at(t);
  const double c = std::cos(base.theta);
  const double si = std::sin(base.theta);
  return {base.x + c * off.x - si * off.y, base.y + si * off.x + c * off.y, off.z};
}

WorldState init_state(const Pose2D& base, std::vector<Obstacle> obstacles, const ArmModel& arm) {
  WorldState s;
  s.base = base;
  s.obstacles = std::move(obstacles);
  s.ee_actual = expected_ee(base, arm, 0.0);
  s.ee_anchor = s.ee_actual;
  return s;
}

WorldState step_arm(WorldState s, const ArmModel& arm, double dt) {
  // Anchor velocity by finite difference of the expected point across the
  // step; the damper acts on the relative velocity.
  const Point3 target = expected_ee(s.base, arm, s.time);
  const Vec3 anchor_vel = (target - s.ee_anchor) * (1.0 / dt);

  const Vec3 disp = s.ee_actual - target;
  const Vec3 rel_vel = s.ee_velocity - anchor_vel;
  const Vec3 accel = (disp * -arm.stiffness + rel_vel * -arm.damping) * (1.0 / arm.mass);

  s.ee_velocity = s.ee_velocity + accel * dt;
  s.ee_actual = s.ee_actual + s.ee_velocity * dt;
  s.ee_anchor = target;
  return s;
}

RangeScan scan(const WorldState& s, const SensorSpec& sensor) {
  RangeScan out;
  out.max_range = sensor.max_range;
  out.angles.reserve(static_cast<std::size_t>(sensor.ray_count));
  out.ranges.reserve(static_cast<std::size_t>(sensor.ray_count));
  const Vec2 o = s.base.position();
  for (int i = 0; i < sensor.ray_count; ++i) {
    const double rel = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(sensor.ray_count);
    const double ang = s.base.theta + rel;
    const Vec2 dir{std::cos(ang), std::sin(ang)};
    double best = sensor.max_range;
    for (const auto& ob : s.obstacles) {
      if (const auto t = ray_hit(ob, o, dir); t && *t < best) {
        best = *t;
      }
    }
    out.angles.push_back(rel);
    out.ranges.push_back(std::max(best, 1e-9));
  }
  return out;
}

RangeScan scan(const WorldState& s, const SensorSpec& sensor, std::mt19937_64& rng) {
  RangeScan out = scan(s, sensor);
  if (sensor.noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, sensor.noise_std);
    for (auto& r : out.ranges) {
      r = std::clamp(r + noise(rng), 1e-9, sensor.max_range);
    }
  }
  return out;
}

std::vector<Vec2> scan_hit_points(const RangeScan& scan, const Pose2D& base) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    if (scan.ranges[i] < scan.max_range - 1e-9) {
      const double ang = base.theta + scan.angles[i];
      pts.push_back({base.x + scan.ranges[i] * std::cos(ang), base.y + scan.ranges[i] * std::sin(ang)});
    }
  }
  return pts;
}

PointIndex::PointIndex(std::vector<Vec2> points, double cell_size)
    : points_(std::move(points)), cell_(cell_size) {
  if (points_.empty()) {
    return;
  }
  min_ = points_.front();
  Vec2 max = min_;
  for (const auto& p : points_) {
    min_.x = std::min(min_.x, p.x);
    min_.y = std::min(min_.y, p.y);
    max.x = std::max(max.x, p.x);
    max.y = std::max(max.y, p.y);
  }
  nx_ = static_cast<int>((max.x - min_.x) / cell_) + 1;
  ny_ = static_cast<int>((max.y - min_.y) / cell_) + 1;
  buckets_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const int ix = static_cast<int>((points_[i].x - min_.x) / cell_);
    const int iy = static_cast<int>((points_[i].y - min_.y) / cell_);
    buckets_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(static_cast<int>(i));
  }
}

double PointIndex::min_distance(const Vec2& p, double cap) const {
  if (points_.empty()) {
    return cap;
  }
  const int r = static_cast<int>(cap / cell_) + 1;
  const int cx = static_cast<int>(std::floor((p.x - min_.x) / cell_));
  const int cy = static_cast<int>(std::floor((p.y - min_.y) / cell_));
  double best_sq = cap * cap;
  for (int iy = std::max(0, cy - r); iy <= std::min(ny_ - 1, cy + r); ++iy) {
    for (int ix = std::max(0, cx - r); ix <= std::min(nx_ - 1, cx + r); ++ix) {
      for (const int idx : buckets_[static_cast<std::size_t>(iy) * nx_ + ix]) {
        best_sq = std::min(best_sq, (points_[static_cast<std::size_t>(idx)] - p).squared_norm());
      }
    }
  }
  return std::sqrt(best_sq);
}

OccupancyGrid rasterize(const std::vector<Obstacle>& obstacles, const Vec2& origin, double width_m,
                        double height_m, double resolution, bool mapped_only) {
  const int w = static_cast<int>(std::lround(width_m / resolution));
  const int h = static_cast<int>(std::lround(height_m / resolution));
  OccupancyGrid g = OccupancyGrid::make(resolution, w, h, {origin.x, origin.y, 0.0});
  for (const auto& ob : obstacles) {
    if (mapped_only && !ob.mapped) {
      continue;
    }
    // Only sweep the obstacle's bounding box.
    Vec2 lo, hi;
    if (const auto* c = std::get_if<Circle>(&ob.shape)) {
      lo = {c->center.x - c->radius, c->center.y - c->radius};
      hi = {c->center.x + c->radius, c->center.y + c->radius};
    } else {
      const auto& r = std::get<Rect>(ob.shape);
      lo = r.min;
      hi = r.max;
    }
    const int ix0 = std::max(0, static_cast<int>(std::floor((lo.x - origin.x) / resolution)) - 1);
    const int iy0 = std::max(0, static_cast<int>(std::floor((lo.y - origin.y) / resolution)) - 1);
    const int ix1 = std::min(w - 1, static_cast<int>(std::floor((hi.x - origin.x) / resolution)) + 1);
    const int iy1 = std::min(h - 1, static_cast<int>(std::floor((hi.y - origin.y) / resolution)) + 1);
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        if (ob.signed_distance(g.cell_center(ix, iy)) <= 0.0) {
          g.set(ix, iy, true);
        }
      }
    }
  }
  return g;
}

}  // namespace navbench
