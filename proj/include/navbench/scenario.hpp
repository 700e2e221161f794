#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "navbench/geometry.hpp"
#include "navbench/grid.hpp"
#include "navbench/world.hpp"

namespace navbench {

struct MapExtent {
  Vec2 origin{-10.0, -10.0};
  double width_m = 20.0;
  double height_m = 20.0;
  double resolution = 0.05;
};

/// One benchmark world plus the trial boundary conditions. The obstacle
/// list is the true world; the planner only ever sees the mapped subset
/// (rasterized) plus whatever its sensor picks up.
struct Scenario {
  std::string id;
  std::string notes;
  MapExtent extent;
  std::vector<Obstacle> obstacles;
  Pose2D start;
  Pose2D goal;
  GoalTolerance goal_tolerance;
  ArmModel arm;
  SensorSpec sensor;
  double timeout = 180.0;  // s

  /// Map handed to the global planner: mapped obstacles only.
  OccupancyGrid planner_map() const;

  /// Throws ScenarioInvalid when start/goal collide or the timeout is
  /// non-positive.
  void validate(const RobotSpec& spec) const;
};

/// The worlds shipped with the repo: an open playground, an office with
/// doorways, a warehouse with shelf aisles (each with a primed variant that
/// adds unmapped obstacles on the nominal route), a moving-arm office run,
/// and a fully blocked corridor for failure accounting.
const std::vector<Scenario>& builtin_scenarios();

/// Builtin by id; throws ScenarioInvalid for unknown ids.
const Scenario& find_scenario(const std::string& id);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

/// Loads a scenario file; `id_or_path` may also name a builtin.
Scenario resolve_scenario(const std::string& id_or_path);

}  // namespace navbench
