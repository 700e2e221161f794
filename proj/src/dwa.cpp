#include "navbench/dwa.hpp"

#include <algorithm>
#include <cmath>

namespace navbench {

VelocityWindow dynamic_window(const Twist& current, const RobotSpec& spec, double dt_ctrl) {
  VelocityWindow w;
  w.v_lo = std::max(spec.v_min, current.v - spec.a_lin_max * dt_ctrl);
  w.v_hi = std::min(spec.v_max, current.v + spec.a_lin_max * dt_ctrl);
  w.omega_lo = std::max(-spec.omega_max, current.omega - spec.a_ang_max * dt_ctrl);
  w.omega_hi = std::min(spec.omega_max, current.omega + spec.a_ang_max * dt_ctrl);
  return w;
}

std::vector<Pose2D> rollout_poses(const Pose2D& start, const Twist& cand, double horizon,
                                  double dt) {
  const int n = static_cast<int>(std::lround(horizon / dt));
  std::vector<Pose2D> poses;
  poses.reserve(static_cast<std::size_t>(n));
  Pose2D p = start;
  for (int i = 0; i < n; ++i) {
    if (std::abs(cand.omega) < 1e-9) {
      p.x += cand.v * dt * std::cos(p.theta);
      p.y += cand.v * dt * std::sin(p.theta);
    } else {
      const double th1 = p.theta + cand.omega * dt;
      p.x += cand.v / cand.omega * (std::sin(th1) - std::sin(p.theta));
      p.y -= cand.v / cand.omega * (std::cos(th1) - std::cos(p.theta));
      p.theta = normalize_angle(th1);
    }
    poses.push_back(p);
  }
  return poses;
}

double min_clearance(const std::vector<Pose2D>& poses, const PointIndex& sensed,
                     double footprint_radius, double cap) {
  double best = cap;
  for (const auto& p : poses) {
    const double d = sensed.min_distance(p.position(), cap + footprint_radius);
    best = std::min(best, d - footprint_radius);
  }
  return best;
}

bool admissible(const std::vector<Pose2D>& poses, const PointIndex& sensed, const Twist& cand,
                const RobotSpec& spec) {
  const double cap = spec.footprint_radius + 2.0;
  const double clearance = min_clearance(poses, sensed, spec.footprint_radius, cap);
  if (clearance <= 0.0) {
    return false;
  }
  const double stopping = cand.v * cand.v / (2.0 * spec.a_lin_max);
  return stopping <= clearance;
}

double score_rollout(const Rollout& r, const GlobalPath& path, const Vec2& goal,
                     const DwaConfig& cfg) {
  const Vec2 end = r.poses.empty() ? Vec2{} : r.poses.back().position();
  const double d_path = path.empty() ? 0.0 : path.distance_to(end);
  const double d_goal = (end - goal).norm();
  const double clearance = std::min(r.clearance, cfg.clearance_cap);
  return cfg.w_path * (-d_path) + cfg.w_goal * (-d_goal) + cfg.w_clearance * clearance +
         cfg.w_speed * std::abs(r.candidate.v);
}

namespace {

double sample_at(double lo, double hi, int count, int i) {
  if (count <= 1) {
    return lo;
  }
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

std::vector<Rollout> evaluate_window(const Pose2D& pose, const Twist& twist,
                                     const PointIndex& sensed, const GlobalPath& path,
                                     const Vec2& goal, const DwaConfig& cfg,
                                     const RobotSpec& spec, double dt_ctrl) {
  const VelocityWindow win = dynamic_window(twist, spec, dt_ctrl);
  std::vector<Rollout> rollouts;
  rollouts.reserve(static_cast<std::size_t>(cfg.v_samples) * cfg.omega_samples);
  const double cap = spec.footprint_radius + 2.0;
  for (int iv = 0; iv < cfg.v_samples; ++iv) {
    for (int iw = 0; iw < cfg.omega_samples; ++iw) {
      Rollout r;
      r.candidate = {sample_at(win.v_lo, win.v_hi, cfg.v_samples, iv),
                     sample_at(win.omega_lo, win.omega_hi, cfg.omega_samples, iw)};
      r.poses = rollout_poses(pose, r.candidate, cfg.horizon, cfg.rollout_dt);
      r.clearance = min_clearance(r.poses, sensed, spec.footprint_radius, cap);
      const double stopping = r.candidate.v * r.candidate.v / (2.0 * spec.a_lin_max);
      r.admissible = r.clearance > 0.0 && stopping <= r.clearance;
      if (r.admissible) {
        r.score = score_rollout(r, path, goal, cfg);
      }
      rollouts.push_back(std::move(r));
    }
  }
  return rollouts;
}

std::optional<Twist> choose(const Pose2D& pose, const Twist& twist, const PointIndex& sensed,
                            const GlobalPath& path, const Pose2D& goal, const GoalTolerance& tol,
                            const DwaConfig& cfg, const RobotSpec& spec, double dt_ctrl) {
  if ((pose.position() - goal.position()).norm() <= tol.position) {
    return Twist{0.0, 0.0};
  }
  const auto rollouts = evaluate_window(pose, twist, sensed, path, goal.position(), cfg, spec, dt_ctrl);
  const Rollout* best = nullptr;
  for (const auto& r : rollouts) {
    if (!r.admissible) {
      continue;
    }
    // Sample order is v-major ascending, omega ascending, so strict
    // improvement gives the lower-v / lower-omega tie-break for free.
    if (best == nullptr || r.score > best->score) {
      best = &r;
    }
  }
  if (best == nullptr) {
    return std::nullopt;
  }
  return best->candidate;
}

std::optional<Twist> DwaPlanner::step(const Pose2D& pose, const Twist& twist,
                                      const PointIndex& sensed, const GlobalPath& path,
                                      const Pose2D& goal, const GoalTolerance& tol, double t) {
  const double d_goal = (pose.position() - goal.position()).norm();
  if (d_goal > tol.position) {
    progress_.push_back({t, d_goal});
    while (!progress_.empty() && progress_.front().first < t - cfg_.stuck_window - 1e-9) {
      progress_.pop_front();
    }
    const bool window_full = progress_.back().first - progress_.front().first >=
                             cfg_.stuck_window - 1e-9;
    if (window_full && progress_.front().second - d_goal < cfg_.stuck_progress) {
      return std::nullopt;
    }
  }
  return choose(pose, twist, sensed, path, goal, tol, cfg_, spec_, kDtControl);
}

void DwaPlanner::notify_replan() { progress_.clear(); }

}  // namespace navbench
