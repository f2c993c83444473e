#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spsnav/planner.hpp"
#include "spsnav/scene.hpp"
#include "spsnav/state.hpp"

namespace spsnav {

struct TrialConfig {
  double dt = 0.05;              // integration step [s]
  double control_period = 0.05;  // replanning interval [s]
  double tau = 0.2;              // velocity response time constant [s]
  double uav_radius = 0.3;       // [m]
  double time_budget = 0.0;      // [s]; <= 0 means 3x the straight-line time
  double v_set = 17.0;           // [m/s]

  void validate() const;  // throws ContractViolation
};

enum class Outcome { success, collision, timeout, out_of_bounds };

std::string_view to_string(Outcome outcome);
Outcome outcome_from_string(std::string_view name);

struct TrajectorySample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

struct TrialRecord {
  Outcome outcome = Outcome::timeout;
  std::vector<TrajectorySample> trajectory;
  double min_clearance = 0.0;  // body clearance: surface distance minus uav_radius
  double max_accel = 0.0;
  double mean_accel = 0.0;
  long long candidates_evaluated_total = 0;
  long long relaxations_total = 0;
  long long replans = 0;
  std::uint64_t seed = 0;
};

struct StepResult {
  UavState state;
  Vec3 acceleration = Vec3::Zero();
};

// First-order velocity tracking: v' = v + (dt/tau)(command - v), p' = p + v' dt.
StepResult step_dynamics(const UavState& state, const Vec3& command, double dt, double tau);

// Closed-loop flight from scene.start until the goal plane x = goal.x is
// crossed, a collision, leaving the corridor, or the time budget runs out.
// The vehicle enters the corridor at cruise speed aimed at the goal.
TrialRecord run_trial(const Scene& scene, const Planner& planner, const TrialConfig& config,
                      std::uint64_t seed);

// CSV with header t,x,y,z,vx,vy,vz,ax,ay,az and 6 significant digits.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& trajectory);

}  // namespace spsnav
