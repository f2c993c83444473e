#include "spsnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spsnav/errors.hpp"

namespace spsnav {

namespace {

constexpr double kHoverSpeed = 0.1;
constexpr double kTieTolerance = 1e-12;

bool prefer(const CandidatePath& a, std::size_t ia, const CandidatePath& b, std::size_t ib) {
  if (a.score > b.score + kTieTolerance) return true;
  if (b.score > a.score + kTieTolerance) return false;
  const double pa = std::abs(a.phi), pb = std::abs(b.phi);
  if (pa < pb - kTieTolerance) return true;
  if (pb < pa - kTieTolerance) return false;
  return ia < ib;
}

}  // namespace

void ScoringConfig::validate() const {
  if (!(v_set > 0.0)) throw ContractViolation("planner: v_set must be positive");
  if (!(relaxation_step > 0.0)) throw ContractViolation("planner: relaxation_step must be positive");
  if (d_safety < 0.0) throw ContractViolation("planner: d_safety must be non-negative");
  if (w_goal < 0.0 || w_safety < 0.0 || w_x < 0.0 || w_y < 0.0 || turn_factor < 0.0)
    throw ContractViolation("planner: scoring weights must be non-negative");
  if (!(clearance_norm > 0.0)) throw ContractViolation("planner: clearance_norm must be positive");
  if (!(horizon > 0.0)) throw ContractViolation("planner: horizon must be positive");
  if (time_samples < 2) throw ContractViolation("planner: time_samples must be at least 2");
}

void PlannerConfig::validate() const {
  ScoringConfig::validate();
  if (n < 2 || n % 2 != 0) throw ContractViolation("sps: n must be a positive even integer");
  if (theta_set.empty()) throw ContractViolation("sps: theta_set must not be empty");
}

std::vector<double> PlannerConfig::directions_for(SceneType type) {
  return type == SceneType::forest ? lateral_directions() : principal_directions();
}

Frame search_frame(const UavState& state, const Vec3& goal) {
  if (state.velocity.norm() > kHoverSpeed) return Frame::looking_along(state.position, state.velocity);
  const Vec3 to_goal = goal - state.position;
  if (to_goal.norm() == 0.0) throw ContractViolation("planner: vehicle is already at the goal");
  return Frame::looking_along(state.position, to_goal);
}

std::vector<CandidatePath> sample_candidates_sps(const UavState& state, const Vec3& goal,
                                                 const PlannerConfig& config) {
  config.validate();
  if ((goal - state.position).norm() == 0.0)
    throw ContractViolation("sps: vehicle is already at the goal");
  const Frame frame = search_frame(state, goal);
  const int per_direction = config.n / 2;
  std::vector<CandidatePath> out;
  out.reserve(config.theta_set.size() * static_cast<std::size_t>(per_direction));
  for (const double theta : config.theta_set) {
    for (int i = 1; i <= per_direction; ++i) {
      CandidatePath c;
      c.phi = static_cast<double>(i) * kMaxSteering / static_cast<double>(per_direction);
      c.theta = theta;
      c.waypoint = spherical_to_cartesian({config.v_set, c.phi, c.theta}, frame);
      out.push_back(c);
    }
  }
  return out;
}

ScoreComponents score_components(const CandidatePath& c, const UavState& state, const Vec3& goal,
                                 const ScoringConfig& config) {
  const Vec3 step = c.waypoint - state.position;
  const Vec3 to_goal = goal - state.position;
  ScoreComponents s;

  const double denom = step.norm() * to_goal.norm();
  const double cos_alpha = denom > 0.0 ? std::clamp(step.dot(to_goal) / denom, -1.0, 1.0) : 1.0;
  s.s_goal = 0.5 * (1.0 + cos_alpha);
  s.s_safety = std::clamp(c.clearance / config.clearance_norm, 0.0, 1.0);

  const double sp = std::sin(c.phi);
  s.s_x = 1.0 - std::abs(sp * std::cos(c.theta));

  double k = config.w_y;
  const double speed = state.velocity.norm();
  if (speed > kHoverSpeed && step.norm() > 0.0) {
    const double cos_turn = std::clamp(step.dot(state.velocity) / (step.norm() * speed), -1.0, 1.0);
    if (std::acos(cos_turn) > config.turn_threshold) k *= config.turn_factor;
  }
  s.s_y_offset = -k * std::abs(sp * std::sin(c.theta));
  return s;
}

double score_candidate(const CandidatePath& c, const UavState& state, const Vec3& goal,
                       const ScoringConfig& config, ScoreComponents* components) {
  const ScoreComponents s = score_components(c, state, goal, config);
  if (components) *components = s;
  return config.w_goal * s.s_goal + config.w_safety * s.s_safety + config.w_x * s.s_x + s.s_y_offset;
}

double path_clearance(const Vec3& from, const Vec3& waypoint, const Scene& scene,
                      const ScoringConfig& config) {
  const Segment seg{from, waypoint, config.horizon};
  double best = std::numeric_limits<double>::infinity();
  if (!scene.bounds.isEmpty()) {
    // Corridor walls, floor and ceiling. Distance to a face is linear along
    // the segment, so the endpoints bound it.
    const Vec3 lo = scene.bounds.min(), hi = scene.bounds.max();
    for (const Vec3* p : {&from, &waypoint}) {
      for (int axis = 1; axis < 3; ++axis)
        best = std::min({best, (*p)[axis] - lo[axis], hi[axis] - (*p)[axis]});
    }
  }
  for (const Obstacle& o : scene.obstacles)
    best = std::min(best, segment_obstacle_clearance(seg, o, config.time_samples));
  return best;
}

PlanResult select_from_candidates(std::vector<CandidatePath> candidates, const UavState& state,
                                  const Scene& scene, const Vec3& goal,
                                  const ScoringConfig& config) {
  if (candidates.empty()) throw ContractViolation("select_plan: empty candidate list");

  for (CandidatePath& c : candidates) {
    c.clearance = path_clearance(state.position, c.waypoint, scene, config);
    c.score = score_candidate(c, state, goal, config, &c.components);
  }

  PlanResult result;
  result.candidates_evaluated = static_cast<int>(candidates.size());

  constexpr double kZero = 1e-12;
  std::size_t best = candidates.size();
  for (int k = 0;; ++k) {
    const double raw = config.d_safety - static_cast<double>(k) * config.relaxation_step;
    const double threshold = raw <= kZero ? 0.0 : raw;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!(candidates[i].clearance > threshold)) continue;
      if (best == candidates.size() || prefer(candidates[i], i, candidates[best], best)) best = i;
    }
    result.relaxations_applied = k;
    result.threshold = threshold;
    if (best != candidates.size() || threshold <= 0.0) break;
  }

  for (CandidatePath& c : candidates) c.feasible = c.clearance > result.threshold;

  if (best == candidates.size()) {
    result.fallback_used = true;
    best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
      if (candidates[i].clearance > candidates[best].clearance) best = i;
  }

  result.chosen = candidates[best];
  const Vec3 step = result.chosen.waypoint - state.position;
  result.command = step.norm() > 0.0 ? Vec3(config.v_set * step.normalized()) : Vec3::Zero();
  return result;
}

PlanResult select_plan(const UavState& state, const Scene& scene, const Vec3& goal,
                       const PlannerConfig& config) {
  return select_from_candidates(sample_candidates_sps(state, goal, config), state, scene, goal, config);
}

SpsPlanner::SpsPlanner(PlannerConfig config) : config_(std::move(config)) { config_.validate(); }

PlanResult SpsPlanner::plan(const UavState& state, const Scene& scene, const Vec3& goal) const {
  return select_plan(state, scene, goal, config_);
}

}  // namespace spsnav
