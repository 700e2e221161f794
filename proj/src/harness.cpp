#include "navbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <filesystem>
#include <limits>
#include <thread>

#include "navbench/errors.hpp"
#include "navbench/log_io.hpp"

namespace navbench {

std::string planner_name(PlannerKind kind) {
  return kind == PlannerKind::kDwa ? "dwa" : "teb";
}

PlannerKind planner_from_name(const std::string& name) {
  if (name == "dwa") {
    return PlannerKind::kDwa;
  }
  if (name == "teb") {
    return PlannerKind::kTeb;
  }
  throw ScenarioInvalid("unknown planner: " + name);
}

namespace {

void apply_robot_overrides(RobotSpec& r, const nlohmann::json& j) {
  r.v_max = j.value("v_max", r.v_max);
  r.v_min = j.value("v_min", r.v_min);
  r.omega_max = j.value("omega_max", r.omega_max);
  r.a_lin_max = j.value("a_lin_max", r.a_lin_max);
  r.a_ang_max = j.value("a_ang_max", r.a_ang_max);
  r.footprint_radius = j.value("footprint_radius", r.footprint_radius);
}

void apply_dwa_overrides(DwaConfig& c, const nlohmann::json& j) {
  c.v_samples = j.value("v_samples", c.v_samples);
  c.omega_samples = j.value("omega_samples", c.omega_samples);
  c.horizon = j.value("horizon", c.horizon);
  c.rollout_dt = j.value("rollout_dt", c.rollout_dt);
  c.w_path = j.value("w_path", c.w_path);
  c.w_goal = j.value("w_goal", c.w_goal);
  c.w_clearance = j.value("w_clearance", c.w_clearance);
  c.w_speed = j.value("w_speed", c.w_speed);
  c.clearance_cap = j.value("clearance_cap", c.clearance_cap);
  c.stuck_window = j.value("stuck_window", c.stuck_window);
  c.stuck_progress = j.value("stuck_progress", c.stuck_progress);
}

void apply_teb_overrides(TebConfig& c, const nlohmann::json& j) {
  c.w_time = j.value("w_time", c.w_time);
  c.w_obs = j.value("w_obs", c.w_obs);
  c.w_kin = j.value("w_kin", c.w_kin);
  c.w_vel = j.value("w_vel", c.w_vel);
  c.w_acc = j.value("w_acc", c.w_acc);
  c.min_obstacle_distance = j.value("min_obstacle_distance", c.min_obstacle_distance);
  c.iterations = j.value("iterations", c.iterations);
  c.lambda_init = j.value("lambda_init", c.lambda_init);
  c.horizon_length = j.value("horizon_length", c.horizon_length);
  c.resolution = j.value("resolution", c.resolution);
}

void apply_arm_overrides(ArmModel& a, const nlohmann::json& j) {
  a.stiffness = j.value("stiffness", a.stiffness);
  a.damping = j.value("damping", a.damping);
  a.mass = j.value("mass", a.mass);
}

/// Stamps the sensed hit points into the map so re-planning can route
/// around what the sensor has discovered.
void stamp_points(OccupancyGrid& map, const std::vector<Vec2>& points) {
  for (const auto& p : points) {
    int ix = 0, iy = 0;
    if (map.world_to_cell(p, ix, iy)) {
      map.set(ix, iy, true);
    }
  }
}

}  // namespace

TrialConfig make_trial_config(const nlohmann::json& overrides) {
  TrialConfig cfg;
  cfg.teb.min_obstacle_distance = cfg.robot.footprint_radius + 0.1;
  if (overrides.is_object()) {
    if (overrides.contains("robot")) {
      apply_robot_overrides(cfg.robot, overrides["robot"]);
      cfg.teb.min_obstacle_distance = cfg.robot.footprint_radius + 0.1;
    }
    if (overrides.contains("dwa")) {
      apply_dwa_overrides(cfg.dwa, overrides["dwa"]);
    }
    if (overrides.contains("teb")) {
      apply_teb_overrides(cfg.teb, overrides["teb"]);
    }
    cfg.stall_window = overrides.value("stall_window", cfg.stall_window);
    cfg.stall_progress = overrides.value("stall_progress", cfg.stall_progress);
    cfg.max_replans = overrides.value("max_replans", cfg.max_replans);
  }
  return cfg;
}

TrajectoryLog run_trial(const Scenario& scenario_in, PlannerKind planner, std::uint64_t seed,
                        const nlohmann::json& overrides, int* replans_out) {
  Scenario scenario = scenario_in;
  TrialConfig cfg = make_trial_config(overrides);
  if (overrides.is_object()) {
    if (overrides.contains("arm")) {
      apply_arm_overrides(scenario.arm, overrides["arm"]);
    }
    if (overrides.contains("sensor")) {
      scenario.sensor.ray_count = overrides["sensor"].value("rays", scenario.sensor.ray_count);
      scenario.sensor.max_range =
          overrides["sensor"].value("max_range", scenario.sensor.max_range);
      scenario.sensor.noise_std =
          overrides["sensor"].value("noise_std", scenario.sensor.noise_std);
    }
    scenario.timeout = overrides.value("timeout", scenario.timeout);
  }
  scenario.validate(cfg.robot);

  const RobotSpec& robot = cfg.robot;
  const GoalTolerance tol = scenario.goal_tolerance;
  std::mt19937_64 rng(seed);

  TrajectoryLog log;
  log.goal = scenario.goal;

  WorldState world = init_state(scenario.start, scenario.obstacles, scenario.arm);
  const OccupancyGrid base_map = scenario.planner_map();
  OccupancyGrid working_map = base_map;

  GlobalPath path;
  bool plan_ok = true;
  try {
    path = plan(working_map, scenario.start, scenario.goal, robot);
  } catch (const NoPath&) {
    plan_ok = false;
  }
  log.global_path = path;

  DwaPlanner dwa(cfg.dwa, robot);
  TebPlanner teb(cfg.teb, robot);

  const auto log_sample = [&](const Twist& cmd) {
    log.samples.push_back({world.time, world.base, cmd,
                           expected_ee(world.base, scenario.arm, world.time), world.ee_actual});
  };
  log_sample({0.0, 0.0});

  int replans = 0;
  int consecutive_stuck = 0;
  double d_goal_at_last_stuck = std::numeric_limits<double>::infinity();
  std::deque<std::pair<double, double>> stall_window;
  std::string failure;
  bool success = false;

  const int sim_per_ctrl = static_cast<int>(std::lround(kDtControl / kDtSim));

  while (true) {
    if (world.time > scenario.timeout) {
      failure = "timeout";
      break;
    }

    const RangeScan sc = scenario.sensor.noise_std > 0.0
                             ? scan(world, scenario.sensor, rng)
                             : scan(world, scenario.sensor);
    const std::vector<Vec2> hits = scan_hit_points(sc, world.base);
    const PointIndex sensed(hits);

    const double d_goal = (world.base.position() - scenario.goal.position()).norm();
    const double heading_err = std::abs(normalize_angle(scenario.goal.theta - world.base.theta));
    const bool stopped = std::abs(world.twist.v) <= 0.05 && std::abs(world.twist.omega) <= 0.1;
    if (d_goal <= tol.position && heading_err <= tol.heading && stopped &&
        log.samples.size() >= 3) {
      success = true;
      break;
    }

    Twist cmd{0.0, 0.0};
    if (d_goal <= tol.position) {
      // Arrival: bleed off speed and rotate onto the goal heading.
      const double w_des = std::clamp(2.0 * normalize_angle(scenario.goal.theta - world.base.theta),
                                      -robot.omega_max, robot.omega_max);
      cmd = {0.0, w_des};
      stall_window.clear();
    } else {
      std::optional<Twist> maybe;
      if (!plan_ok) {
        maybe = std::nullopt;
      } else if (planner == PlannerKind::kDwa) {
        maybe = dwa.step(world.base, world.twist, sensed, path, scenario.goal, tol, world.time);
      } else {
        maybe = teb.step(world.base, world.twist, sensed, path, scenario.goal, tol, world.time);
      }

      bool stalled = false;
      stall_window.push_back({world.time, d_goal});
      while (!stall_window.empty() &&
             stall_window.front().first < world.time - cfg.stall_window - 1e-9) {
        stall_window.pop_front();
      }
      if (stall_window.back().first - stall_window.front().first >= cfg.stall_window - 1e-9 &&
          stall_window.front().second - d_goal < cfg.stall_progress) {
        stalled = true;
      }

      if (!maybe || stalled) {
        // Stuck: re-plan on a map enriched with everything sensed so far.
        if (d_goal_at_last_stuck - d_goal >= cfg.stall_progress) {
          consecutive_stuck = 0;
        }
        ++consecutive_stuck;
        d_goal_at_last_stuck = d_goal;
        if (consecutive_stuck > cfg.max_replans) {
          failure = "stuck";
          break;
        }
        ++replans;
        stamp_points(working_map, hits);
        try {
          path = plan(working_map, world.base, scenario.goal, robot);
          plan_ok = true;
          log.global_path = log.global_path.empty() ? path : log.global_path;
        } catch (const NoPath&) {
          // keep the previous path; the stuck accounting decides the trial
        }
        dwa.notify_replan();
        teb.notify_replan();
        stall_window.clear();
        cmd = {0.0, 0.0};
      } else {
        cmd = *maybe;
      }
    }

    for (int i = 0; i < sim_per_ctrl && !world.collided; ++i) {
      world = step_arm(step_base(world, cmd, robot, kDtSim), scenario.arm, kDtSim);
    }
    log_sample(cmd);
    if (world.collided) {
      failure = "collision";
      break;
    }
  }

  // Metrics need at least 3 samples even for instant arrivals.
  while (log.samples.size() < 3) {
    world = step_arm(step_base(world, {0.0, 0.0}, robot, kDtSim), scenario.arm, kDtSim);
    log_sample({0.0, 0.0});
  }

  log.t_start = log.samples.front().t;
  log.t_final = log.samples.back().t;
  log.success = success;
  log.failure_reason = failure;
  if (replans_out) {
    *replans_out = replans;
  }
  return log;
}

namespace {

std::optional<MetricStats> stats_of(const std::vector<double>& values) {
  if (values.empty()) {
    return std::nullopt;
  }
  double mean = 0.0;
  for (const double v : values) {
    mean += v;
  }
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (const double v : values) {
    var += (v - mean) * (v - mean);
  }
  var /= static_cast<double>(values.size());
  return MetricStats{mean, std::sqrt(var)};
}

}  // namespace

CampaignSummary summarize(const std::vector<TrialResult>& trials) {
  CampaignSummary summary;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& t : trials) {
    const auto key = std::make_pair(t.scenario, t.planner);
    if (std::find(order.begin(), order.end(), key) == order.end()) {
      order.push_back(key);
    }
  }
  for (const auto& [scenario, planner] : order) {
    SummaryCell cell;
    cell.scenario = scenario;
    cell.planner = planner;
    std::vector<double> p_s, p_e_x, p_e_y, p_e_z, d_trav, a_btw, p_acc, t_taken;
    for (const auto& t : trials) {
      if (t.scenario != scenario || t.planner != planner) {
        continue;
      }
      ++cell.trials;
      if (!t.metrics.success) {
        ++cell.failures;
        continue;
      }
      ++cell.successes;
      p_s.push_back(*t.metrics.p_s);
      p_e_x.push_back(*t.metrics.p_e_x);
      p_e_y.push_back(*t.metrics.p_e_y);
      p_e_z.push_back(*t.metrics.p_e_z);
      d_trav.push_back(*t.metrics.d_travelled);
      a_btw.push_back(*t.metrics.a_between);
      p_acc.push_back(*t.metrics.p_acc);
      t_taken.push_back(t.metrics.t_taken);
    }
    cell.p_s = stats_of(p_s);
    cell.p_e_x = stats_of(p_e_x);
    cell.p_e_y = stats_of(p_e_y);
    cell.p_e_z = stats_of(p_e_z);
    cell.d_travelled = stats_of(d_trav);
    cell.a_between = stats_of(a_btw);
    cell.p_acc = stats_of(p_acc);
    cell.t_taken = stats_of(t_taken);
    summary.cells.push_back(std::move(cell));
  }
  return summary;
}

CampaignResult run_campaign(const std::vector<TrialSpec>& specs, const CampaignOptions& options) {
  struct Job {
    const TrialSpec* spec;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& spec : specs) {
    for (int rep = 0; rep < std::max(1, spec.repetitions); ++rep) {
      jobs.push_back({&spec, spec.seed + static_cast<std::uint64_t>(rep)});
    }
  }

  std::vector<TrialResult> results(jobs.size());
  const auto run_job = [&](std::size_t i) {
    const Job& job = jobs[i];
    TrialResult r;
    r.scenario = job.spec->scenario;
    r.planner = planner_name(job.spec->planner);
    r.seed = job.seed;
    const Scenario scenario = resolve_scenario(job.spec->scenario);
    r.log = run_trial(scenario, job.spec->planner, job.seed, job.spec->overrides, &r.replans);
    r.metrics = report(r.log);
    results[i] = std::move(r);
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1 || jobs.size() <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      run_job(i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
          run_job(i);
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  CampaignResult out;
  out.trials = std::move(results);
  out.summary = summarize(out.trials);

  if (!options.out_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(options.out_dir) / "logs", ec);
    fs::create_directories(fs::path(options.out_dir) / "plots", ec);
    if (ec) {
      throw IoError("cannot create output directory " + options.out_dir);
    }
    write_summary_json(out.summary, (fs::path(options.out_dir) / "summary.json").string());
    write_summary_csv(out.summary, (fs::path(options.out_dir) / "summary.csv").string());
    write_trials_csv(out.trials, (fs::path(options.out_dir) / "trials.csv").string());
    for (const auto& t : out.trials) {
      const std::string stem = t.scenario + "__" + t.planner + "__seed" + std::to_string(t.seed);
      const std::string log_file = (fs::path(options.out_dir) / "logs" / (stem + ".csv")).string();
      write_log_csv(t.log, log_file);
      write_path_csv(t.log.global_path,
                     (fs::path(options.out_dir) / "logs" / (stem + ".path.csv")).string());
      write_meta_json(t.log, (fs::path(options.out_dir) / "logs" / (stem + ".meta.json")).string(),
                      t.scenario, t.planner, t.seed);
      write_plot_series(t.log, (fs::path(options.out_dir) / "plots").string(), stem);
    }
  }
  return out;
}

}  // namespace navbench
