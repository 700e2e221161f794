#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "navbench/dwa.hpp"
#include "navbench/metrics.hpp"
#include "navbench/scenario.hpp"
#include "navbench/teb.hpp"

namespace navbench {

enum class PlannerKind { kDwa, kTeb };

std::string planner_name(PlannerKind kind);
PlannerKind planner_from_name(const std::string& name);  // throws ScenarioInvalid

/// One cell request of a campaign: scenario x planner x `repetitions`
/// trials seeded seed, seed+1, ...
struct TrialSpec {
  std::string scenario;
  PlannerKind planner = PlannerKind::kDwa;
  std::uint64_t seed = 1;
  int repetitions = 10;
  nlohmann::json overrides;  // optional robot/dwa/teb/arm/sensor/timeout tweaks
};

/// Everything configurable about one trial, after overrides are applied.
struct TrialConfig {
  RobotSpec robot;
  DwaConfig dwa;
  TebConfig teb;
  double stall_window = 3.0;    // s, harness progress watchdog
  double stall_progress = 0.05; // m
  int max_replans = 3;          // consecutive no-progress re-plans before failing
};

TrialConfig make_trial_config(const nlohmann::json& overrides);

struct TrialResult {
  std::string scenario;
  std::string planner;
  std::uint64_t seed = 0;
  TrajectoryLog log;
  MetricsReport metrics;
  int replans = 0;
};

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

/// One (scenario, planner) row of the summary. Metric stats are absent when
/// every trial in the cell failed (dash semantics).
struct SummaryCell {
  std::string scenario;
  std::string planner;
  int trials = 0;
  int successes = 0;
  int failures = 0;
  std::optional<MetricStats> p_s, p_e_x, p_e_y, p_e_z, d_travelled, a_between, p_acc, t_taken;
};

struct CampaignSummary {
  std::vector<SummaryCell> cells;
};

struct CampaignOptions {
  int workers = 1;
  std::string out_dir;  // empty: keep everything in memory
};

struct CampaignResult {
  CampaignSummary summary;
  std::vector<TrialResult> trials;
};

/// Runs one seeded trial: control loop at kDtControl
/// (sense -> plan -> act -> log) until goal, collision, timeout or repeated
/// Stuck. The log always carries at least 3 samples.
TrajectoryLog run_trial(const Scenario& scenario, PlannerKind planner, std::uint64_t seed,
                        const nlohmann::json& overrides = nlohmann::json::object(),
                        int* replans_out = nullptr);

/// Expands the specs into trials, executes them (concurrently when
/// workers > 1), aggregates per (scenario, planner) in spec order, and —
/// when out_dir is set — writes logs, reports and plot series.
CampaignResult run_campaign(const std::vector<TrialSpec>& specs,
                            const CampaignOptions& options = {});

/// Deterministic reduction used by run_campaign; exposed for tests.
CampaignSummary summarize(const std::vector<TrialResult>& trials);

}  // namespace navbench
