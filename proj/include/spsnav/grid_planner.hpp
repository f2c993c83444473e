#pragma once

#include <vector>

#include "spsnav/planner.hpp"

namespace spsnav {

// Planar n x n search on the plane facing the goal at distance v_set, spanning
// the same angular envelope (+-pi/15) as the spherical search.
struct GridConfig : ScoringConfig {
  int n = 16;

  void validate() const;
};

// Row-major over the lateral axis, then the vertical axis.
std::vector<CandidatePath> sample_candidates_grid(const UavState& state, const Vec3& goal,
                                                  const GridConfig& config);

PlanResult select_plan_grid(const UavState& state, const Scene& scene, const Vec3& goal,
                            const GridConfig& config);

class GridPlanner final : public Planner {
 public:
  explicit GridPlanner(GridConfig config);
  std::string_view name() const override { return "grid"; }
  PlanResult plan(const UavState& state, const Scene& scene, const Vec3& goal) const override;
  const GridConfig& config() const { return config_; }

 private:
  GridConfig config_;
};

}  // namespace spsnav
