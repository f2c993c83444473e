#include "spsnav/grid_planner.hpp"

#include <cmath>

#include "spsnav/errors.hpp"

namespace spsnav {

void GridConfig::validate() const {
  ScoringConfig::validate();
  if (n < 2) throw ContractViolation("grid: n must be at least 2");
}

std::vector<CandidatePath> sample_candidates_grid(const UavState& state, const Vec3& goal,
                                                  const GridConfig& config) {
  config.validate();
  if ((goal - state.position).norm() == 0.0)
    throw ContractViolation("grid: vehicle is already at the goal");
  // The plane faces the goal, independent of the current velocity.
  const Frame frame = Frame::looking_along(state.position, goal - state.position);
  const double extent = config.v_set * std::tan(kMaxSteering);
  const double spacing = 2.0 * extent / static_cast<double>(config.n - 1);

  std::vector<CandidatePath> out;
  out.reserve(static_cast<std::size_t>(config.n) * static_cast<std::size_t>(config.n));
  for (int row = 0; row < config.n; ++row) {
    const double lateral = -extent + spacing * static_cast<double>(row);
    for (int col = 0; col < config.n; ++col) {
      const double vertical = -extent + spacing * static_cast<double>(col);
      CandidatePath c;
      const Vec3 local(config.v_set, lateral, vertical);
      c.phi = std::atan2(std::hypot(lateral, vertical), config.v_set);
      c.theta = (lateral == 0.0 && vertical == 0.0) ? 0.0 : std::atan2(vertical, lateral);
      c.waypoint = frame.to_world(local);
      out.push_back(c);
    }
  }
  return out;
}

PlanResult select_plan_grid(const UavState& state, const Scene& scene, const Vec3& goal,
                            const GridConfig& config) {
  return select_from_candidates(sample_candidates_grid(state, goal, config), state, scene, goal, config);
}

GridPlanner::GridPlanner(GridConfig config) : config_(std::move(config)) { config_.validate(); }

PlanResult GridPlanner::plan(const UavState& state, const Scene& scene, const Vec3& goal) const {
  return select_plan_grid(state, scene, goal, config_);
}

}  // namespace spsnav
