#include "navbench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "navbench/errors.hpp"

namespace navbench {
namespace {

std::vector<Vec2> base_positions(const TrajectoryLog& log) {
  std::vector<Vec2> pts;
  pts.reserve(log.samples.size());
  for (const auto& s : log.samples) {
    pts.push_back(s.base.position());
  }
  return pts;
}

}  // namespace

double path_smoothness(const TrajectoryLog& log) {
  if (log.samples.size() < 3) {
    throw InsufficientSamples("path_smoothness needs at least 3 samples");
  }
  const std::vector<Vec2> pts = base_positions(log);
  std::vector<Vec2> segments;
  segments.reserve(pts.size() - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Vec2 d = pts[i] - pts[i - 1];
    if (d.norm() > kSegmentEpsilon) {
      segments.push_back(d);
    }
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    sum += angle_between(segments[i - 1], segments[i]);
  }
  return sum;
}

Point3 ee_stability(const TrajectoryLog& log) {
  if (log.samples.size() < 2) {
    throw InsufficientSamples("ee_stability needs at least 2 samples");
  }
  Point3 integral;
  for (std::size_t i = 1; i < log.samples.size(); ++i) {
    const auto& a = log.samples[i - 1];
    const auto& b = log.samples[i];
    const double dt = b.t - a.t;
    const Vec3 ea = a.ee_expected - a.ee_actual;
    const Vec3 eb = b.ee_expected - b.ee_actual;
    integral.x += 0.5 * (std::abs(ea.x) + std::abs(eb.x)) * dt;
    integral.y += 0.5 * (std::abs(ea.y) + std::abs(eb.y)) * dt;
    integral.z += 0.5 * (std::abs(ea.z) + std::abs(eb.z)) * dt;
  }
  return integral;
}

double distance_travelled(const TrajectoryLog& log) {
  if (log.samples.size() < 2) {
    throw InsufficientSamples("distance_travelled needs at least 2 samples");
  }
  const std::vector<Vec2> pts = base_positions(log);
  double sum = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    sum += (pts[i] - pts[i - 1]).norm();
  }
  return sum;
}

double d_between(const std::vector<Vec2>& a, const std::vector<Vec2>& b, int m) {
  const std::vector<Vec2> ra = resample_polyline(a, m);
  const std::vector<Vec2> rb = resample_polyline(b, m);
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    sum += (ra[static_cast<std::size_t>(i)] - rb[static_cast<std::size_t>(i)]).squared_norm();
  }
  return sum;
}

double path_divergence(const TrajectoryLog& log) {
  if (log.samples.size() < 2) {
    throw InsufficientSamples("path_divergence needs at least 2 samples");
  }
  if (log.global_path.empty()) {
    throw EmptyGlobalPath("path_divergence needs a global path");
  }
  const int m = static_cast<int>(std::min(log.samples.size(), log.global_path.size()));
  const double d = d_between(base_positions(log), log.global_path.positions(), m);
  return d * distance_travelled(log) / static_cast<double>(m);
}

double final_accuracy(const TrajectoryLog& log) {
  if (log.samples.empty()) {
    throw InsufficientSamples("final_accuracy needs at least 1 sample");
  }
  return (log.samples.back().base.position() - log.goal.position()).squared_norm();
}

double total_time(const TrajectoryLog& log) { return log.t_final - log.t_start; }

MetricsReport report(const TrajectoryLog& log) {
  MetricsReport r;
  r.success = log.success;
  r.t_taken = total_time(log);
  if (!log.success) {
    return r;
  }
  r.p_s = path_smoothness(log);
  const Point3 pe = ee_stability(log);
  r.p_e_x = pe.x;
  r.p_e_y = pe.y;
  r.p_e_z = pe.z;
  r.d_travelled = distance_travelled(log);
  r.a_between = path_divergence(log);
  r.p_acc = final_accuracy(log);
  r.p_acc_dist = std::sqrt(*r.p_acc);
  return r;
}

}  // namespace navbench
