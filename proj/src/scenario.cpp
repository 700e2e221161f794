#include "navbench/scenario.hpp"

#include <cmath>
#include <fstream>

#include "navbench/errors.hpp"

namespace navbench {
namespace {

Obstacle make_rect(double x0, double y0, double x1, double y1, bool mapped = true) {
  Obstacle o;
  o.shape = Rect{{x0, y0}, {x1, y1}};
  o.mapped = mapped;
  return o;
}

Obstacle make_circle(double cx, double cy, double r, bool mapped = true) {
  Obstacle o;
  o.shape = Circle{{cx, cy}, r};
  o.mapped = mapped;
  return o;
}

/// Four boundary walls just inside the extent, 0.2 m thick.
void add_walls(Scenario& s) {
  const double x0 = s.extent.origin.x;
  const double y0 = s.extent.origin.y;
  const double x1 = x0 + s.extent.width_m;
  const double y1 = y0 + s.extent.height_m;
  const double t = 0.2;
  s.obstacles.push_back(make_rect(x0, y0, x1, y0 + t));
  s.obstacles.push_back(make_rect(x0, y1 - t, x1, y1));
  s.obstacles.push_back(make_rect(x0, y0, x0 + t, y1));
  s.obstacles.push_back(make_rect(x1 - t, y0, x1, y1));
}

Scenario playground() {
  Scenario s;
  s.id = "playground";
  s.notes = "open 20x20 m area with sparse boxes, diagonal run";
  s.extent = {{-10.0, -10.0}, 20.0, 20.0, 0.05};
  add_walls(s);
  s.obstacles.push_back(make_rect(-4.5, -2.5, -3.5, -1.5));
  s.obstacles.push_back(make_rect(-1.5, 2.0, -0.5, 3.0));
  s.obstacles.push_back(make_rect(1.5, -1.5, 2.5, -0.5));
  s.obstacles.push_back(make_rect(4.5, 2.5, 5.5, 3.5));
  s.obstacles.push_back(make_circle(1.5, 4.5, 0.6));
  s.obstacles.push_back(make_circle(-5.0, 4.0, 0.6));
  s.obstacles.push_back(make_circle(4.0, -4.0, 0.5));
  s.start = {-8.0, -8.0, M_PI / 4.0};
  s.goal = {8.0, 8.0, M_PI / 4.0};
  return s;
}

Scenario playground_dynamic() {
  Scenario s = playground();
  s.id = "playground_dynamic";
  s.notes = "playground with two unmapped obstacles on the nominal route";
  s.obstacles.push_back(make_circle(0.2, 0.2, 0.5, /*mapped=*/false));
  s.obstacles.push_back(make_rect(4.2, 3.8, 5.0, 4.6, /*mapped=*/false));
  return s;
}

Scenario office() {
  Scenario s;
  s.id = "office";
  s.notes = "two doorways between start room and goal room";
  s.extent = {{-10.0, -10.0}, 20.0, 20.0, 0.05};
  add_walls(s);
  // Vertical wall with a doorway at y in (-1.5, -0.3).
  s.obstacles.push_back(make_rect(-3.1, -10.0, -2.9, -1.5));
  s.obstacles.push_back(make_rect(-3.1, -0.3, -2.9, 10.0));
  // Horizontal wall with a doorway at x in (4.5, 5.7).
  s.obstacles.push_back(make_rect(-3.1, 2.9, 4.5, 3.1));
  s.obstacles.push_back(make_rect(5.7, 2.9, 10.0, 3.1));
  // Furniture in the middle room.
  s.obstacles.push_back(make_rect(0.5, -1.5, 1.5, -0.5));
  s.start = {-7.5, -7.0, 0.0};
  s.goal = {7.0, 7.5, M_PI / 2.0};
  return s;
}

Scenario office_dynamic() {
  Scenario s = office();
  s.id = "office_dynamic";
  s.notes = "office with an unmapped obstacle between the doorways";
  s.obstacles.push_back(make_circle(1.0, 1.0, 0.45, /*mapped=*/false));
  return s;
}

Scenario office_moving_arm() {
  Scenario s = office();
  s.id = "office_moving_arm";
  s.notes = "office run with the arm re-posed while the base is moving";
  s.arm.schedule = {{0.0, {0.25, 0.0, 1.0}},
                    {8.0, {0.25, 0.0, 1.0}},
                    {12.0, {0.0, -0.3, 0.7}}};
  return s;
}

Scenario warehouse() {
  Scenario s;
  s.id = "warehouse";
  s.notes = "three shelf rows, staggered gaps, one tight corridor";
  s.extent = {{-8.0, -8.0}, 16.0, 16.0, 0.05};
  add_walls(s);
  s.obstacles.push_back(make_rect(-7.8, -2.9, 2.4, -2.1));
  s.obstacles.push_back(make_rect(3.6, -2.9, 7.8, -2.1));
  s.obstacles.push_back(make_rect(-7.8, -0.4, -0.6, 0.4));
  s.obstacles.push_back(make_rect(0.6, -0.4, 7.8, 0.4));
  s.obstacles.push_back(make_rect(-7.8, 2.1, -3.6, 2.9));
  s.obstacles.push_back(make_rect(-2.4, 2.1, 7.8, 2.9));
  s.start = {0.0, -6.0, M_PI / 2.0};
  s.goal = {0.0, 6.0, M_PI / 2.0};
  return s;
}

Scenario warehouse_dynamic() {
  Scenario s = warehouse();
  s.id = "warehouse_dynamic";
  s.notes = "warehouse with an unmapped obstacle narrowing the tight corridor";
  s.obstacles.push_back(make_circle(0.45, 0.0, 0.35, /*mapped=*/false));
  return s;
}

Scenario corridor_blocked() {
  Scenario s;
  s.id = "corridor_blocked";
  s.notes = "straight corridor fully blocked by an unmapped obstacle; no detour exists";
  s.extent = {{-7.0, -2.0}, 14.0, 4.0, 0.05};
  add_walls(s);
  s.obstacles.push_back(make_rect(0.0, -1.8, 0.8, 1.8, /*mapped=*/false));
  s.start = {-5.5, 0.0, 0.0};
  s.goal = {5.5, 0.0, 0.0};
  s.timeout = 120.0;
  return s;
}

}  // namespace

OccupancyGrid Scenario::planner_map() const {
  return rasterize(obstacles, extent.origin, extent.width_m, extent.height_m, extent.resolution,
                   /*mapped_only=*/true);
}

void Scenario::validate(const RobotSpec& spec) const {
  if (timeout <= 0.0) {
    throw ScenarioInvalid(id + ": timeout must be positive");
  }
  if (extent.width_m <= 0.0 || extent.height_m <= 0.0 || extent.resolution <= 0.0) {
    throw ScenarioInvalid(id + ": degenerate map extent");
  }
  for (const auto& ob : obstacles) {
    if (ob.signed_distance(start.position()) <= spec.footprint_radius) {
      throw ScenarioInvalid(id + ": start pose collides with an obstacle");
    }
    if (ob.signed_distance(goal.position()) <= spec.footprint_radius) {
      throw ScenarioInvalid(id + ": goal pose collides with an obstacle");
    }
  }
}

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> scenarios = {
      playground(),       playground_dynamic(), office(),           office_dynamic(),
      office_moving_arm(), warehouse(),          warehouse_dynamic(), corridor_blocked()};
  return scenarios;
}

const Scenario& find_scenario(const std::string& id) {
  for (const auto& s : builtin_scenarios()) {
    if (s.id == id) {
      return s;
    }
  }
  throw ScenarioInvalid("unknown scenario: " + id);
}

namespace {

Vec2 vec2_from_json(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Pose2D pose_from_json(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  try {
    s.id = j.at("id").get<std::string>();
    s.notes = j.value("notes", "");
    const auto& m = j.at("map");
    s.extent.origin = vec2_from_json(m.at("origin"));
    s.extent.width_m = m.at("size").at(0).get<double>();
    s.extent.height_m = m.at("size").at(1).get<double>();
    s.extent.resolution = m.value("resolution", 0.05);
    s.start = pose_from_json(j.at("start"));
    s.goal = pose_from_json(j.at("goal"));
    if (j.contains("goal_tolerance")) {
      s.goal_tolerance.position = j["goal_tolerance"].value("position", 0.15);
      s.goal_tolerance.heading = j["goal_tolerance"].value("heading", 0.2);
    }
    s.timeout = j.value("timeout", 180.0);
    if (j.contains("sensor")) {
      s.sensor.ray_count = j["sensor"].value("rays", 360);
      s.sensor.max_range = j["sensor"].value("max_range", 10.0);
      s.sensor.noise_std = j["sensor"].value("noise_std", 0.0);
    }
    if (j.contains("arm")) {
      const auto& a = j["arm"];
      s.arm.stiffness = a.value("stiffness", 400.0);
      s.arm.damping = a.value("damping", 18.0);
      s.arm.mass = a.value("mass", 5.0);
      if (a.contains("schedule")) {
        s.arm.schedule.clear();
        for (const auto& kf : a["schedule"]) {
          const auto& off = kf.at("offset");
          s.arm.schedule.push_back({kf.at("t").get<double>(),
                                    {off.at(0).get<double>(), off.at(1).get<double>(),
                                     off.at(2).get<double>()}});
        }
      }
    }
    for (const auto& jo : j.value("obstacles", nlohmann::json::array())) {
      Obstacle o;
      const std::string type = jo.at("type").get<std::string>();
      if (type == "circle") {
        o.shape = Circle{vec2_from_json(jo.at("center")), jo.at("radius").get<double>()};
      } else if (type == "rect") {
        o.shape = Rect{vec2_from_json(jo.at("min")), vec2_from_json(jo.at("max"))};
      } else {
        throw ScenarioInvalid("unknown obstacle type: " + type);
      }
      o.mapped = jo.value("mapped", true);
      if (jo.contains("velocity")) {
        o.velocity = vec2_from_json(jo["velocity"]);
      }
      s.obstacles.push_back(o);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioInvalid(std::string("scenario JSON: ") + e.what());
  }
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["notes"] = s.notes;
  j["map"] = {{"origin", {s.extent.origin.x, s.extent.origin.y}},
              {"size", {s.extent.width_m, s.extent.height_m}},
              {"resolution", s.extent.resolution}};
  j["start"] = {s.start.x, s.start.y, s.start.theta};
  j["goal"] = {s.goal.x, s.goal.y, s.goal.theta};
  j["goal_tolerance"] = {{"position", s.goal_tolerance.position},
                         {"heading", s.goal_tolerance.heading}};
  j["timeout"] = s.timeout;
  j["sensor"] = {{"rays", s.sensor.ray_count},
                 {"max_range", s.sensor.max_range},
                 {"noise_std", s.sensor.noise_std}};
  nlohmann::ordered_json arm;
  arm["stiffness"] = s.arm.stiffness;
  arm["damping"] = s.arm.damping;
  arm["mass"] = s.arm.mass;
  arm["schedule"] = nlohmann::json::array();
  for (const auto& kf : s.arm.schedule) {
    arm["schedule"].push_back(
        {{"t", kf.t}, {"offset", {kf.offset.x, kf.offset.y, kf.offset.z}}});
  }
  j["arm"] = arm;
  j["obstacles"] = nlohmann::json::array();
  for (const auto& o : s.obstacles) {
    nlohmann::ordered_json jo;
    if (const auto* c = std::get_if<Circle>(&o.shape)) {
      jo["type"] = "circle";
      jo["center"] = {c->center.x, c->center.y};
      jo["radius"] = c->radius;
    } else {
      const auto& r = std::get<Rect>(o.shape);
      jo["type"] = "rect";
      jo["min"] = {r.min.x, r.min.y};
      jo["max"] = {r.max.x, r.max.y};
    }
    jo["mapped"] = o.mapped;
    if (o.velocity) {
      jo["velocity"] = {o.velocity->x, o.velocity->y};
    }
    j["obstacles"].push_back(jo);
  }
  return j;
}

Scenario resolve_scenario(const std::string& id_or_path) {
  for (const auto& s : builtin_scenarios()) {
    if (s.id == id_or_path) {
      return s;
    }
  }
  std::ifstream in(id_or_path);
  if (!in) {
    throw ScenarioInvalid("no builtin scenario or readable file named '" + id_or_path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioInvalid("failed to parse scenario file " + id_or_path + ": " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace navbench
