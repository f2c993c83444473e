#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "spsnav/grid_planner.hpp"
#include "spsnav/planner.hpp"
#include "spsnav/scene.hpp"
#include "spsnav/simulator.hpp"

namespace spsnav {

inline const std::vector<std::string>& planner_names() {
  static const std::vector<std::string> names{"sps", "grid"};
  return names;
}

struct BatchConfig {
  std::vector<SceneSpec> scenes;  // seeds are overwritten per trial
  std::vector<double> speeds{5.0, 9.0, 13.0, 17.0};
  std::vector<std::string> planners{"sps", "grid"};
  int trials_per_cell = 100;
  std::uint64_t base_seed = 7;
  int jobs = 1;
  int export_trajectories = 0;  // first N trials of every cell keep their trajectory
  TrialConfig trial;            // v_set is set per cell
  PlannerConfig sps;            // v_set and theta_set are set per cell
  GridConfig grid;              // v_set is set per cell

  void validate() const;  // throws ConfigError
};

// Planner for one benchmark cell: `name` is "sps" or "grid".
std::unique_ptr<Planner> make_planner(const std::string& name, double v_set, SceneType scene_type,
                                      const PlannerConfig& sps, const GridConfig& grid);

// One line of the records file.
struct TrialSummary {
  SceneType scene_type = SceneType::static_spheres;
  double speed = 0.0;
  std::string planner;
  int trial_index = 0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::timeout;
  double duration = 0.0;
  double min_clearance = 0.0;
  double mean_accel = 0.0;
  double max_accel = 0.0;
  long long candidates_evaluated_total = 0;
  long long relaxations_total = 0;
  long long replans = 0;
};

struct CellMetrics {
  SceneType scene_type = SceneType::static_spheres;
  double speed = 0.0;
  std::string planner;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_accel = 0.0;       // mean over trials of each trial's mean |a|
  double max_accel = 0.0;        // mean over trials of each trial's max |a|
  double mean_candidates = 0.0;  // candidates evaluated per replan
};

struct ExportedTrajectory {
  TrialSummary summary;
  std::vector<TrajectorySample> trajectory;
};

struct BatchResult {
  std::vector<TrialSummary> records;  // sorted by (scene, speed, planner, trial)
  std::vector<CellMetrics> metrics;
  std::vector<ExportedTrajectory> trajectories;
};

TrialSummary summarize(const TrialRecord& record, SceneType scene_type, double speed,
                       const std::string& planner, int trial_index);

// Every (scene, speed, planner) cell runs trials_per_cell trials on scenes
// seeded base_seed + trial index, so competing planners see identical scenes.
BatchResult run_batch(const BatchConfig& config);

// Per-cell aggregates; independent of the order of `records`.
std::vector<CellMetrics> aggregate(std::vector<TrialSummary> records);

}  // namespace spsnav
