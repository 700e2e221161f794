#pragma once

#include <string>
#include <vector>

#include "navbench/harness.hpp"
#include "navbench/metrics.hpp"

namespace navbench {

/// Shortest round-trip decimal form of v (std::to_chars), so every written
/// value reads back bit-identical.
std::string format_double(double v);

/// Log CSV schema, one row per control tick:
///   t,base_x,base_y,base_theta,cmd_v,cmd_omega,
///   ee_exp_x,ee_exp_y,ee_exp_z,ee_act_x,ee_act_y,ee_act_z
void write_log_csv(const TrajectoryLog& log, const std::string& path);

/// Sidecar with the global path waypoints (x,y,theta).
void write_path_csv(const GlobalPath& path, const std::string& file);

/// Sidecar with goal, success flag and provenance.
void write_meta_json(const TrajectoryLog& log, const std::string& file,
                     const std::string& scenario = "", const std::string& planner = "",
                     std::uint64_t seed = 0);

/// Parses a log CSV (header mandatory, any column order, extra columns
/// ignored) and pulls in the <stem>.path.csv / <stem>.meta.json sidecars
/// when they exist. Throws SchemaError for missing columns, ParseError for
/// malformed values and NonMonotonicTime for unsorted timestamps.
TrajectoryLog ingest_log(const std::string& log_csv);

void write_summary_json(const CampaignSummary& summary, const std::string& file);
void write_summary_csv(const CampaignSummary& summary, const std::string& file);
std::string summary_json_string(const CampaignSummary& summary);
std::string summary_csv_string(const CampaignSummary& summary);

void write_trials_csv(const std::vector<TrialResult>& trials, const std::string& file);

/// Plot-ready series for one trial:
///   <stem>_ee_error.csv    t and |e| per axis
///   <stem>_smoothness.csv  x,y and the turn angle at each sample
///   <stem>_paths.csv       global and travelled curves, tagged by series
void write_plot_series(const TrajectoryLog& log, const std::string& dir, const std::string& stem);

}  // namespace navbench
