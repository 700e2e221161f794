#include "navbench/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "navbench/errors.hpp"

namespace navbench {

double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * M_PI);
  if (r <= -M_PI) {
    r += 2.0 * M_PI;
  }
  return r;
}

Pose2D compose(const Pose2D& a, const Pose2D& b) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y, normalize_angle(a.theta + b.theta)};
}

Pose2D inverse(const Pose2D& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {-(c * p.x + s * p.y), s * p.x - c * p.y, normalize_angle(-p.theta)};
}

double angle_between(const Vec2& u, const Vec2& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu <= kSegmentEpsilon || nv <= kSegmentEpsilon) {
    throw DegenerateSegment("angle_between: segment shorter than 1e-9 m");
  }
  const Vec2 un{u.x / nu, u.y / nu};
  const Vec2 vn{v.x / nv, v.y / nv};
  const double d = std::clamp(dot(un, vn), -1.0, 1.0);
  return std::acos(d);
}

double polyline_length(const std::vector<Vec2>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    len += (pts[i] - pts[i - 1]).norm();
  }
  return len;
}

std::vector<Vec2> resample_polyline(const std::vector<Vec2>& pts, int m) {
  std::vector<Vec2> out;
  if (pts.empty() || m <= 0) {
    return out;
  }
  out.reserve(static_cast<std::size_t>(m));

  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
  }
  const double total = cum.back();
  if (total <= 0.0 || m == 1) {
    out.assign(static_cast<std::size_t>(m), pts.front());
    return out;
  }

  std::size_t seg = 0;
  for (int k = 0; k < m; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(m - 1);
    while (seg + 2 < pts.size() && cum[seg + 1] < s) {
      ++seg;
    }
    const double seg_len = cum[seg + 1] - cum[seg];
    const double t = seg_len > 0.0 ? std::clamp((s - cum[seg]) / seg_len, 0.0, 1.0) : 0.0;
    out.push_back(pts[seg] + (pts[seg + 1] - pts[seg]) * t);
  }
  return out;
}

}  // namespace navbench
