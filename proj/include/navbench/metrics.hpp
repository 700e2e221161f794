#pragma once

#include <optional>
#include <string>
#include <vector>

#include "navbench/geometry.hpp"
#include "navbench/global_planner.hpp"

namespace navbench {

/// One control-tick sample of a trial.
struct LogSample {
  double t = 0.0;
  Pose2D base;
  Twist cmd;
  Point3 ee_expected;
  Point3 ee_actual;

  bool operator==(const LogSample&) const = default;
};

/// Complete record of a trial: the raw material every metric consumes.
struct TrajectoryLog {
  std::vector<LogSample> samples;
  GlobalPath global_path;  // the initial global plan (re-plans do not replace it)
  Pose2D goal;
  double t_start = 0.0;
  double t_final = 0.0;
  bool success = false;
  std::string failure_reason;  // empty, "collision", "timeout" or "stuck"
};

/// One Table-style row. Failed trials carry only t_taken and success;
/// every other field is absent (dash semantics).
struct MetricsReport {
  std::optional<double> p_s;
  std::optional<double> p_e_x;
  std::optional<double> p_e_y;
  std::optional<double> p_e_z;
  std::optional<double> d_travelled;
  std::optional<double> a_between;
  std::optional<double> p_acc;       // squared distance, as the formula is printed
  std::optional<double> p_acc_dist;  // companion plain distance
  double t_taken = 0.0;
  bool success = false;

  bool operator==(const MetricsReport&) const = default;
};

/// Sum of turn angles between consecutive travelled-path segments (rad).
/// Segments shorter than kSegmentEpsilon are skipped. Needs >= 3 samples.
double path_smoothness(const TrajectoryLog& log);

/// Componentwise trapezoidal integral of |p_exp - p_act| over the trial
/// (meter-seconds per axis). Needs >= 2 samples.
Point3 ee_stability(const TrajectoryLog& log);

/// Sum of Euclidean distances between consecutive base positions.
double distance_travelled(const TrajectoryLog& log);

/// Sum of squared distances between two curves after both are resampled by
/// arc length to m aligned points.
double d_between(const std::vector<Vec2>& a, const std::vector<Vec2>& b, int m);

/// Area-style divergence between the travelled path and the global path:
/// both resampled to m = min(N, n) points, then
/// d_between * d_travelled / m.
double path_divergence(const TrajectoryLog& log);

/// Squared distance between the final base position and the goal.
double final_accuracy(const TrajectoryLog& log);

/// t_final - t_start.
double total_time(const TrajectoryLog& log);

/// All metrics of one trial; failure rows keep dash semantics.
MetricsReport report(const TrajectoryLog& log);

}  // namespace navbench
