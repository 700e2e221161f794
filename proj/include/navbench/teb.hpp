#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "navbench/geometry.hpp"
#include "navbench/global_planner.hpp"
#include "navbench/world.hpp"

namespace navbench {

struct TebConfig {
  double w_time = 1.0;
  double w_obs = 50.0;
  double w_kin = 1000.0;
  double w_vel = 2.0;
  double w_acc = 1.0;
  double min_obstacle_distance = 0.4;  // m, footprint + margin
  int iterations = 8;                  // outer damped-least-squares passes
  double lambda_init = 1e-3;
  double horizon_length = 3.0;  // m of global path covered by the band
  double resolution = 0.3;      // m between seeded vertices
};

inline constexpr double kDtFloor = 1e-3;

/// Elastic band: poses with strictly positive time intervals between them.
/// Endpoints are fixed during optimization. start_twist (when set) anchors
/// the first interval's acceleration to the robot's current speed;
/// end_is_goal adds a zero-terminal-velocity acceleration term so the band
/// brakes into the goal instead of sailing through it.
struct Band {
  std::vector<Pose2D> poses;
  std::vector<double> dts;  // size = poses.size() - 1
  std::optional<Twist> start_twist;
  bool end_is_goal = false;

  std::size_t size() const { return poses.size(); }
  double total_time() const;
  bool valid() const { return poses.size() >= 3 && dts.size() + 1 == poses.size(); }
};

/// Seeds a band along the global path starting at the path point nearest to
/// `current`: one vertex every cfg.resolution meters of arc length, up to
/// cfg.horizon_length (or the path end). The first vertex is replaced by the
/// robot pose, and dts start at segment length / v_max. Bands are padded to
/// at least 3 vertices.
Band seed_band(const GlobalPath& path, const Pose2D& current, const TebConfig& cfg,
               const RobotSpec& spec);

/// Stacked weighted residual vector, fixed order:
///   [time (n-1)] [obstacle (n)] [kinematics (n-1)]
///   [linear velocity (n-1)] [angular velocity (n-1)] [acceleration (n-2)]
///   [start accel (1, when start_twist)] [terminal accel (1, when end_is_goal)]
/// Hinge terms are zero inside their feasible region.
std::vector<double> residuals(const Band& band, const PointIndex& obstacles, const TebConfig& cfg,
                              const RobotSpec& spec);

/// Sum of squared residuals.
double band_cost(const Band& band, const PointIndex& obstacles, const TebConfig& cfg,
                 const RobotSpec& spec);

/// Free variables, in order: (x, y, theta) for every interior vertex, then
/// every dt. Endpoints are not free.
int free_variable_count(const Band& band);

/// Central-difference Jacobian of the residual vector over the free
/// variables, step h.
Eigen::MatrixXd numeric_jacobian(const Band& band, const PointIndex& obstacles,
                                 const TebConfig& cfg, const RobotSpec& spec, double h = 1e-6);

struct OptimizeStep {
  double cost_before = 0.0;
  double cost_after = 0.0;
  double lambda = 0.0;
  bool accepted = false;
};

struct OptimizeTrace {
  std::vector<OptimizeStep> steps;
};

struct OptimizeResult {
  Band band;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  bool stuck = false;  // lambda escalated past 1e8
};

/// Damped least-squares over the free variables: solves
/// (J^T J + lambda I) delta = -J^T r, doubling lambda on rejected steps and
/// halving it on accepted ones. dts are clamped above kDtFloor. When lambda
/// escalates past 1e8 the input band is returned with stuck set. The
/// returned band never costs more than the input band.
OptimizeResult optimize(const Band& band, const PointIndex& obstacles, const TebConfig& cfg,
                        const RobotSpec& spec, OptimizeTrace* trace = nullptr);

/// First-segment command: v = signed chord length / dt_0 (sign from heading
/// alignment), omega = heading difference / dt_0, both clamped to the limits.
Twist control_from_band(const Band& band, const RobotSpec& spec);

/// Band lifecycle around optimize(): re-seeds from the (possibly
/// re-planned) global path when the band start drifts more than 0.5 m from
/// the robot or the optimizer reports stuck, otherwise advances the band in
/// place. nullopt = Stuck.
class TebPlanner {
 public:
  TebPlanner(TebConfig cfg, RobotSpec spec) : cfg_(cfg), spec_(spec) {}

  std::optional<Twist> step(const Pose2D& pose, const Twist& twist, const PointIndex& sensed,
                            const GlobalPath& path, const Pose2D& goal, const GoalTolerance& tol,
                            double t);

  void notify_replan() { needs_reseed_ = true; }
  const Band& band() const { return band_; }

 private:
  void maintain_band(const Pose2D& pose, const GlobalPath& path, const Pose2D& goal);

  TebConfig cfg_;
  RobotSpec spec_;
  Band band_;
  bool have_band_ = false;
  bool needs_reseed_ = false;
};

}  // namespace navbench
