#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "navbench/geometry.hpp"
#include "navbench/global_planner.hpp"
#include "navbench/world.hpp"

namespace navbench {

struct DwaConfig {
  int v_samples = 11;
  int omega_samples = 21;
  double horizon = 2.0;      // s
  double rollout_dt = 0.1;   // s
  double w_path = 1.0;
  double w_goal = 0.8;
  double w_clearance = 0.3;
  double w_speed = 0.2;
  double clearance_cap = 1.0;   // m, keeps open space from dominating
  double stuck_window = 3.0;    // s
  double stuck_progress = 0.05; // m
};

/// Velocities reachable within one control period under the acceleration
/// limits, intersected with the global limits.
struct VelocityWindow {
  double v_lo = 0.0;
  double v_hi = 0.0;
  double omega_lo = 0.0;
  double omega_hi = 0.0;
};

struct Rollout {
  Twist candidate;
  std::vector<Pose2D> poses;
  bool admissible = false;
  double clearance = 0.0;  // min over poses of (obstacle distance - footprint)
  double score = 0.0;      // only meaningful when admissible
};

VelocityWindow dynamic_window(const Twist& current, const RobotSpec& spec, double dt_ctrl);

/// Constant-twist forward simulation, horizon/dt poses (start excluded).
std::vector<Pose2D> rollout_poses(const Pose2D& start, const Twist& cand, double horizon,
                                  double dt);

double min_clearance(const std::vector<Pose2D>& poses, const PointIndex& sensed,
                     double footprint_radius, double cap);

/// False when any rollout pose's footprint touches a sensed point or the
/// candidate cannot brake to zero inside the remaining clearance
/// (v^2 / (2 a_lin_max) vs min clearance along the arc).
bool admissible(const std::vector<Pose2D>& poses, const PointIndex& sensed, const Twist& cand,
                const RobotSpec& spec);

/// Critic sum for one rollout; shared by choose() and the search oracles.
double score_rollout(const Rollout& r, const GlobalPath& path, const Vec2& goal,
                     const DwaConfig& cfg);

/// Every sampled rollout of the current window, scored and flagged.
std::vector<Rollout> evaluate_window(const Pose2D& pose, const Twist& twist,
                                     const PointIndex& sensed, const GlobalPath& path,
                                     const Vec2& goal, const DwaConfig& cfg,
                                     const RobotSpec& spec, double dt_ctrl);

/// Best admissible twist, or nullopt when the whole window is blocked.
/// Ties break toward lower v, then lower omega. Returns {0,0} once the
/// robot is inside the positional goal tolerance.
std::optional<Twist> choose(const Pose2D& pose, const Twist& twist, const PointIndex& sensed,
                            const GlobalPath& path, const Pose2D& goal, const GoalTolerance& tol,
                            const DwaConfig& cfg, const RobotSpec& spec, double dt_ctrl);

/// choose() plus the trailing-window progress watchdog; nullopt = Stuck
/// (blocked window or no progress), which the harness answers by
/// re-planning the global path.
class DwaPlanner {
 public:
  DwaPlanner(DwaConfig cfg, RobotSpec spec) : cfg_(cfg), spec_(spec) {}

  std::optional<Twist> step(const Pose2D& pose, const Twist& twist, const PointIndex& sensed,
                            const GlobalPath& path, const Pose2D& goal, const GoalTolerance& tol,
                            double t);

  /// Clears the progress history (call after a global re-plan).
  void notify_replan();

  const DwaConfig& config() const { return cfg_; }

 private:
  DwaConfig cfg_;
  RobotSpec spec_;
  std::deque<std::pair<double, double>> progress_;  // (t, distance to goal)
};

}  // namespace navbench
