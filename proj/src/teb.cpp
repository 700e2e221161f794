#include "navbench/teb.hpp"

#include <algorithm>
#include <cmath>

namespace navbench {
namespace {

double chord(const Pose2D& a, const Pose2D& b) { return (b.position() - a.position()).norm(); }

double segment_speed(const Band& band, std::size_t i) {
  return chord(band.poses[i], band.poses[i + 1]) / band.dts[i];
}

Band apply_step(const Band& band, const Eigen::VectorXd& delta) {
  Band out = band;
  const std::size_t n = band.poses.size();
  std::size_t k = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.poses[i].x += delta(static_cast<Eigen::Index>(k++));
    out.poses[i].y += delta(static_cast<Eigen::Index>(k++));
    out.poses[i].theta = normalize_angle(out.poses[i].theta + delta(static_cast<Eigen::Index>(k++)));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out.dts[i] = std::max(kDtFloor, out.dts[i] + delta(static_cast<Eigen::Index>(k++)));
  }
  return out;
}

}  // namespace

double Band::total_time() const {
  double t = 0.0;
  for (const double dt : dts) {
    t += dt;
  }
  return t;
}

Band seed_band(const GlobalPath& path, const Pose2D& current, const TebConfig& cfg,
               const RobotSpec& spec) {
  Band band;
  const double s0 = path.empty() ? 0.0 : path.nearest_arclength(current.position());
  const double s_end = path.empty() ? 0.0 : std::min(s0 + cfg.horizon_length, path.length());
  band.end_is_goal = s_end >= path.length() - 1e-9;

  std::vector<double> stations;
  stations.push_back(s0);
  double s = s0;
  while (s + cfg.resolution < s_end - 1e-12) {
    s += cfg.resolution;
    stations.push_back(s);
  }
  if (s_end - stations.back() > 1e-6) {
    stations.push_back(s_end);
  }

  for (const double st : stations) {
    band.poses.push_back(path.empty() ? current : path.pose_at(st));
  }
  band.poses.front() = current;
  if (band.end_is_goal && !path.empty()) {
    band.poses.back() = path.waypoints.back();
  }

  // Pad to the minimum band of 3 poses (start, midpoint, end).
  while (band.poses.size() < 3) {
    const Pose2D a = band.poses.front();
    const Pose2D b = band.poses.back();
    const Pose2D mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0,
                     normalize_angle(a.theta + normalize_angle(b.theta - a.theta) / 2.0)};
    if (band.poses.size() == 1) {
      band.poses.push_back(a);
      band.poses.push_back(a);
    } else {
      band.poses.insert(band.poses.begin() + 1, mid);
    }
  }

  band.dts.clear();
  for (std::size_t i = 0; i + 1 < band.poses.size(); ++i) {
    band.dts.push_back(std::max(kDtFloor, chord(band.poses[i], band.poses[i + 1]) / spec.v_max));
  }
  return band;
}

std::vector<double> residuals(const Band& band, const PointIndex& obstacles, const TebConfig& cfg,
                              const RobotSpec& spec) {
  const std::size_t n = band.poses.size();
  std::vector<double> r;
  r.reserve(6 * n);

  const double sw_time = std::sqrt(cfg.w_time);
  const double sw_obs = std::sqrt(cfg.w_obs);
  const double sw_kin = std::sqrt(cfg.w_kin);
  const double sw_vel = std::sqrt(cfg.w_vel);
  const double sw_acc = std::sqrt(cfg.w_acc);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    r.push_back(sw_time * band.dts[i]);
  }

  const double obs_cap = cfg.min_obstacle_distance + 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = obstacles.min_distance(band.poses[i].position(), obs_cap);
    r.push_back(sw_obs * std::max(0.0, cfg.min_obstacle_distance - d));
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec2 seg = band.poses[i + 1].position() - band.poses[i].position();
    if (seg.norm() < kSegmentEpsilon) {
      r.push_back(0.0);
      continue;
    }
    const double dir = std::atan2(seg.y, seg.x);
    const double mean = normalize_angle(
        band.poses[i].theta + normalize_angle(band.poses[i + 1].theta - band.poses[i].theta) / 2.0);
    r.push_back(sw_kin * normalize_angle(dir - mean));
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    r.push_back(sw_vel * std::max(0.0, segment_speed(band, i) - spec.v_max));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double w = std::abs(normalize_angle(band.poses[i + 1].theta - band.poses[i].theta)) /
                     band.dts[i];
    r.push_back(sw_vel * std::max(0.0, w - spec.omega_max));
  }

  for (std::size_t i = 0; i + 2 < n; ++i) {
    const double mean_dt = (band.dts[i] + band.dts[i + 1]) / 2.0;
    const double a = (segment_speed(band, i + 1) - segment_speed(band, i)) / mean_dt;
    r.push_back(sw_acc * std::max(0.0, std::abs(a) - spec.a_lin_max));
  }

  if (band.start_twist) {
    const double a = (segment_speed(band, 0) - band.start_twist->v) / band.dts[0];
    r.push_back(sw_acc * std::max(0.0, std::abs(a) - spec.a_lin_max));
  }
  if (band.end_is_goal) {
    const double v_last = segment_speed(band, n - 2);
    const double a = v_last / band.dts[n - 2];
    r.push_back(sw_acc * std::max(0.0, a - spec.a_lin_max));
  }
  return r;
}

double band_cost(const Band& band, const PointIndex& obstacles, const TebConfig& cfg,
                 const RobotSpec& spec) {
  double c = 0.0;
  for (const double v : residuals(band, obstacles, cfg, spec)) {
    c += v * v;
  }
  return c;
}

int free_variable_count(const Band& band) {
  const int n = static_cast<int>(band.poses.size());
  return 3 * (n - 2) + (n - 1);
}

Eigen::MatrixXd numeric_jacobian(const Band& band, const PointIndex& obstacles,
                                 const TebConfig& cfg, const RobotSpec& spec, double h) {
  const int p = free_variable_count(band);
  const std::vector<double> r0 = residuals(band, obstacles, cfg, spec);
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(r0.size()), p);

  for (int col = 0; col < p; ++col) {
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(p);
    delta(col) = h;
    Band plus = band;
    Band minus = band;
    // Perturb without dt clamping so central differences stay symmetric.
    {
      std::size_t k = 0;
      const std::size_t n = band.poses.size();
      for (std::size_t i = 1; i + 1 < n; ++i) {
        plus.poses[i].x += delta(static_cast<Eigen::Index>(k));
        minus.poses[i].x -= delta(static_cast<Eigen::Index>(k));
        ++k;
        plus.poses[i].y += delta(static_cast<Eigen::Index>(k));
        minus.poses[i].y -= delta(static_cast<Eigen::Index>(k));
        ++k;
        plus.poses[i].theta += delta(static_cast<Eigen::Index>(k));
        minus.poses[i].theta -= delta(static_cast<Eigen::Index>(k));
        ++k;
      }
      for (std::size_t i = 0; i + 1 < n; ++i) {
        plus.dts[i] += delta(static_cast<Eigen::Index>(k));
        minus.dts[i] -= delta(static_cast<Eigen::Index>(k));
        ++k;
      }
    }
    const std::vector<double> rp = residuals(plus, obstacles, cfg, spec);
    const std::vector<double> rm = residuals(minus, obstacles, cfg, spec);
    for (std::size_t row = 0; row < r0.size(); ++row) {
      jac(static_cast<Eigen::Index>(row), col) = (rp[row] - rm[row]) / (2.0 * h);
    }
  }
  return jac;
}

OptimizeResult optimize(const Band& band, const PointIndex& obstacles, const TebConfig& cfg,
                        const RobotSpec& spec, OptimizeTrace* trace) {
  OptimizeResult result;
  result.band = band;
  result.initial_cost = band_cost(band, obstacles, cfg, spec);
  result.final_cost = result.initial_cost;
  if (!band.valid() || result.initial_cost < 1e-20) {
    return result;
  }

  const int p = free_variable_count(band);
  double lambda = cfg.lambda_init;
  double cost = result.initial_cost;
  Band current = band;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const std::vector<double> r = residuals(current, obstacles, cfg, spec);
    Eigen::VectorXd rv(static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      rv(static_cast<Eigen::Index>(i)) = r[i];
    }
    const Eigen::MatrixXd jac = numeric_jacobian(current, obstacles, cfg, spec);
    const Eigen::VectorXd grad = jac.transpose() * rv;
    if (grad.lpNorm<Eigen::Infinity>() < 1e-10) {
      break;  // converged
    }
    const Eigen::MatrixXd hess = jac.transpose() * jac;

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = hess;
      damped.diagonal().array() += lambda;
      const Eigen::VectorXd delta = damped.ldlt().solve(-grad);
      if (delta.lpNorm<Eigen::Infinity>() < 1e-12) {
        break;  // converged: the damped step has vanished
      }
      const Band candidate = apply_step(current, delta);
      const double cand_cost = band_cost(candidate, obstacles, cfg, spec);
      if (trace) {
        trace->steps.push_back({cost, cand_cost, lambda, cand_cost < cost});
      }
      if (cand_cost < cost) {
        current = candidate;
        cost = cand_cost;
        lambda = std::max(lambda * 0.5, 1e-12);
        accepted = true;
      } else {
        lambda *= 2.0;
        if (lambda > 1e8) {
          result.stuck = true;
          result.band = band;  // hand the caller's band back untouched
          result.final_cost = result.initial_cost;
          return result;
        }
      }
    }
    if (!accepted) {
      break;  // converged inside the inner loop
    }
  }

  result.band = current;
  result.final_cost = cost;
  return result;
}

Twist control_from_band(const Band& band, const RobotSpec& spec) {
  if (!band.valid()) {
    return {0.0, 0.0};
  }
  const Pose2D& a = band.poses[0];
  const Pose2D& b = band.poses[1];
  const Vec2 seg = b.position() - a.position();
  const double len = seg.norm();
  const double dtheta = normalize_angle(b.theta - a.theta);
  if (len < kSegmentEpsilon && std::abs(dtheta) < kSegmentEpsilon) {
    return {0.0, 0.0};
  }
  const Vec2 heading{std::cos(a.theta), std::sin(a.theta)};
  const double sign = dot(seg, heading) >= 0.0 ? 1.0 : -1.0;
  double v = sign * len / band.dts[0];
  double omega = dtheta / band.dts[0];
  v = std::clamp(v, spec.v_min, spec.v_max);
  omega = std::clamp(omega, -spec.omega_max, spec.omega_max);
  return {v, omega};
}

void TebPlanner::maintain_band(const Pose2D& pose, const GlobalPath& path, const Pose2D& goal) {
  band_.poses.front() = pose;

  // Drop vertices the robot has already passed.
  while (band_.size() > 3 &&
         (band_.poses[1].position() - pose.position()).norm() < 0.5 * cfg_.resolution) {
    band_.poses.erase(band_.poses.begin() + 1);
    band_.dts.erase(band_.dts.begin());
  }

  const double s_robot = path.nearest_arclength(pose.position());
  const double s_end = std::min(s_robot + cfg_.horizon_length, path.length());
  band_.end_is_goal = s_end >= path.length() - 1e-9;
  if (band_.end_is_goal) {
    Pose2D end = path.waypoints.back();
    end.theta = goal.theta;
    band_.poses.back() = end;
  } else {
    band_.poses.back() = path.pose_at(s_end);
  }

  // One resize pass: split stretched segments, merge collapsed ones.
  for (std::size_t i = 0; i + 1 < band_.poses.size() && band_.size() < 60; ++i) {
    if (chord(band_.poses[i], band_.poses[i + 1]) > 1.5 * cfg_.resolution) {
      const Pose2D& a = band_.poses[i];
      const Pose2D& b = band_.poses[i + 1];
      const Pose2D mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0,
                       normalize_angle(a.theta + normalize_angle(b.theta - a.theta) / 2.0)};
      const double dt_half = std::max(kDtFloor, band_.dts[i] / 2.0);
      band_.poses.insert(band_.poses.begin() + static_cast<std::ptrdiff_t>(i) + 1, mid);
      band_.dts[i] = dt_half;
      band_.dts.insert(band_.dts.begin() + static_cast<std::ptrdiff_t>(i) + 1, dt_half);
      ++i;
    }
  }
  for (std::size_t i = 1; i + 1 < band_.poses.size() && band_.size() > 3; ++i) {
    if (chord(band_.poses[i], band_.poses[i + 1]) < 0.5 * cfg_.resolution) {
      band_.dts[i - 1] = std::max(kDtFloor, band_.dts[i - 1] + band_.dts[i]);
      band_.poses.erase(band_.poses.begin() + static_cast<std::ptrdiff_t>(i));
      band_.dts.erase(band_.dts.begin() + static_cast<std::ptrdiff_t>(i));
      --i;
    }
  }
}

std::optional<Twist> TebPlanner::step(const Pose2D& pose, const Twist& twist,
                                      const PointIndex& sensed, const GlobalPath& path,
                                      const Pose2D& goal, const GoalTolerance& tol, double t) {
  (void)t;
  if ((pose.position() - goal.position()).norm() <= tol.position) {
    return Twist{0.0, 0.0};
  }
  if (path.empty()) {
    return std::nullopt;
  }

  const bool drifted =
      have_band_ && (band_.poses.front().position() - pose.position()).norm() > 0.5;
  if (!have_band_ || needs_reseed_ || !band_.valid() || drifted) {
    band_ = seed_band(path, pose, cfg_, spec_);
    have_band_ = true;
    needs_reseed_ = false;
  } else {
    maintain_band(pose, path, goal);
  }
  band_.start_twist = twist;

  OptimizeResult res = optimize(band_, sensed, cfg_, spec_);
  if (res.stuck) {
    needs_reseed_ = true;
    return std::nullopt;
  }
  band_ = res.band;

  // Band squeezing through an obstacle that optimization could not clear is
  // a dead end; report Stuck instead of steering into it.
  for (std::size_t i = 1; i < band_.poses.size(); ++i) {
    if (sensed.min_distance(band_.poses[i].position(), spec_.footprint_radius) <
        spec_.footprint_radius * 0.95) {
      needs_reseed_ = true;
      return std::nullopt;
    }
  }
  return control_from_band(band_, spec_);
}

}  // namespace navbench
