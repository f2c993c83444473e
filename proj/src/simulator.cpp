#include "spsnav/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "spsnav/errors.hpp"

namespace spsnav {

namespace {

// Instants per integration step when sweeping the vehicle against moving spheres.
constexpr int kStepTimeSamples = 4;

double swept_clearance(const Vec3& from, const Vec3& to, double dt, const Scene& scene) {
  const Segment seg{from, to, dt};
  double best = std::numeric_limits<double>::infinity();
  for (const Obstacle& o : scene.obstacles)
    best = std::min(best, segment_obstacle_clearance(seg, o, kStepTimeSamples));
  return best;
}

bool outside_corridor(const Vec3& p, const Scene& scene) {
  const Vec3 lo = scene.bounds.min(), hi = scene.bounds.max();
  return p.x() < lo.x() || p.y() < lo.y() || p.y() > hi.y() || p.z() < lo.z() || p.z() > hi.z();
}

}  // namespace

void TrialConfig::validate() const {
  if (!(dt > 0.0) || !(control_period >= dt))
    throw ContractViolation("trial: require 0 < dt <= control_period");
  if (!(tau > 0.0)) throw ContractViolation("trial: tau must be positive");
  if (uav_radius < 0.0) throw ContractViolation("trial: uav_radius must be non-negative");
  if (!(v_set > 0.0)) throw ContractViolation("trial: v_set must be positive");
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::success: return "success";
    case Outcome::collision: return "collision";
    case Outcome::timeout: return "timeout";
    case Outcome::out_of_bounds: return "out_of_bounds";
  }
  return "unknown";
}

Outcome outcome_from_string(std::string_view name) {
  if (name == "success") return Outcome::success;
  if (name == "collision") return Outcome::collision;
  if (name == "timeout") return Outcome::timeout;
  if (name == "out_of_bounds") return Outcome::out_of_bounds;
  throw InputError("unknown outcome '" + std::string(name) + "'");
}

StepResult step_dynamics(const UavState& state, const Vec3& command, double dt, double tau) {
  if (!(dt > 0.0) || !(tau > 0.0)) throw ContractViolation("step_dynamics: dt and tau must be positive");
  StepResult r;
  r.state.velocity = state.velocity + (dt / tau) * (command - state.velocity);
  r.state.position = state.position + r.state.velocity * dt;
  r.state.time = state.time + dt;
  r.acceleration = (r.state.velocity - state.velocity) / dt;
  return r;
}

TrialRecord run_trial(const Scene& initial_scene, const Planner& planner, const TrialConfig& config,
                      std::uint64_t seed) {
  config.validate();
  const Vec3 goal = initial_scene.goal;
  const double straight_time = (goal.x() - initial_scene.start.x()) / config.v_set;
  const double budget = config.time_budget > 0.0 ? config.time_budget : 3.0 * straight_time;
  const long long steps_per_replan =
      std::max(1LL, std::llround(config.control_period / config.dt));
  const long long max_steps = static_cast<long long>(std::ceil(budget / config.dt - 1e-9));

  TrialRecord rec;
  rec.seed = seed;
  Scene scene = initial_scene;

  UavState state;
  state.position = initial_scene.start;
  const Vec3 to_goal = goal - initial_scene.start;
  state.velocity = to_goal.norm() > 0.0 ? Vec3(config.v_set * to_goal.normalized()) : Vec3::Zero();
  rec.trajectory.push_back({0.0, state.position, state.velocity, Vec3::Zero()});
  rec.min_clearance = nearest_clearance(state.position, scene).clearance - config.uav_radius;

  Vec3 command = state.velocity;
  double accel_sum = 0.0;
  rec.outcome = Outcome::timeout;
  for (long long k = 0; k < max_steps; ++k) {
    if (k % steps_per_replan == 0) {
      const PlanResult plan = planner.plan(state, scene, goal);
      command = plan.command;
      rec.candidates_evaluated_total += plan.candidates_evaluated;
      rec.relaxations_total += plan.relaxations_applied;
      ++rec.replans;
    }

    StepResult step = step_dynamics(state, command, config.dt, config.tau);
    step.state.time = static_cast<double>(k + 1) * config.dt;
    const double body_clearance =
        swept_clearance(state.position, step.state.position, config.dt, scene) - config.uav_radius;
    scene = advance_obstacles(std::move(scene), config.dt);
    state = step.state;

    const double a = step.acceleration.norm();
    accel_sum += a;
    rec.max_accel = std::max(rec.max_accel, a);
    rec.min_clearance = std::min(rec.min_clearance, body_clearance);
    rec.trajectory.push_back({state.time, state.position, state.velocity, step.acceleration});

    if (body_clearance < 0.0) {
      rec.outcome = Outcome::collision;
      break;
    }
    if (state.position.x() >= goal.x()) {
      rec.outcome = Outcome::success;
      break;
    }
    if (outside_corridor(state.position, scene)) {
      rec.outcome = Outcome::out_of_bounds;
      break;
    }
  }
  const std::size_t steps = rec.trajectory.size() - 1;
  rec.mean_accel = steps > 0 ? accel_sum / static_cast<double>(steps) : 0.0;
  return rec;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& trajectory) {
  out << "t,x,y,z,vx,vy,vz,ax,ay,az\n";
  char buf[512];
  for (const TrajectorySample& s : trajectory) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", s.t,
                  s.position.x(), s.position.y(), s.position.z(), s.velocity.x(), s.velocity.y(),
                  s.velocity.z(), s.acceleration.x(), s.acceleration.y(), s.acceleration.z());
    out << buf;
  }
}

}  // namespace spsnav
