#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "spsnav/geometry.hpp"
#include "spsnav/scene.hpp"
#include "spsnav/state.hpp"

namespace spsnav {

inline constexpr double kPi = 3.14159265358979323846;

// Feasibility and scoring parameters shared by every candidate-sampling planner.
struct ScoringConfig {
  double v_set = 17.0;            // designated speed [m/s]; also the search radius
  double d_safety = 1.0;          // initial feasibility margin [m]
  double relaxation_step = 0.2;   // margin decrement when nothing is feasible [m]
  double w_goal = 0.2;
  double w_safety = 0.4;
  double w_x = 0.4;
  double w_y = 0.4;
  double turn_factor = 1.2;
  double turn_threshold = 5.0 * kPi / 180.0;
  double clearance_norm = 4.0;    // clearance at which s_safety saturates [m]
  double horizon = 1.0;           // seconds to reach a candidate waypoint
  int time_samples = kDefaultTimeSamples;

  void validate() const;
};

struct PlannerConfig : ScoringConfig {
  int n = 16;  // n/2 samples along each principal direction
  std::vector<double> theta_set = principal_directions();

  // Up/down/left/right azimuths, ordered so straight-ahead ties resolve laterally first.
  static std::vector<double> principal_directions() { return {0.0, kPi / 2, kPi, -kPi / 2}; }
  // Lateral-only evasion for forests of vertical trunks.
  static std::vector<double> lateral_directions() { return {0.0, kPi}; }
  static std::vector<double> directions_for(SceneType type);

  void validate() const;
};

struct ScoreComponents {
  double s_goal = 0.0;
  double s_safety = 0.0;
  double s_x = 0.0;
  double s_y_offset = 0.0;
};

struct CandidatePath {
  Vec3 waypoint = Vec3::Zero();
  double phi = 0.0;
  double theta = 0.0;
  double clearance = 0.0;
  bool feasible = false;
  double score = 0.0;
  ScoreComponents components;
};

struct PlanResult {
  CandidatePath chosen;
  Vec3 command = Vec3::Zero();
  int candidates_evaluated = 0;
  int relaxations_applied = 0;
  bool fallback_used = false;
  double threshold = 0.0;  // margin in force when the plan was chosen
};

// Forward axis of the search: current velocity if moving faster than 0.1 m/s,
// otherwise the goal direction.
Frame search_frame(const UavState& state, const Vec3& goal);

// One candidate per (theta, phi_i), phi_i = i (pi/15) / (n/2) for i = 1..n/2,
// theta-major in theta_set order. Clearance and score are left unset.
std::vector<CandidatePath> sample_candidates_sps(const UavState& state, const Vec3& goal,
                                                 const PlannerConfig& config);

// Weighted goal/safety/offset score. Reads c.clearance, leaves c untouched.
ScoreComponents score_components(const CandidatePath& c, const UavState& state,
                                 const Vec3& goal, const ScoringConfig& config);
double score_candidate(const CandidatePath& c, const UavState& state, const Vec3& goal,
                       const ScoringConfig& config, ScoreComponents* components = nullptr);

// Minimum clearance of the straight path to `waypoint` over all obstacles and
// the lateral/vertical corridor faces.
double path_clearance(const Vec3& from, const Vec3& waypoint, const Scene& scene,
                      const ScoringConfig& config);

// Feasibility, relaxation and argmax shared by the SPS and grid planners.
// Ties prefer smaller |phi|, then earlier position in `candidates`.
PlanResult select_from_candidates(std::vector<CandidatePath> candidates, const UavState& state,
                                  const Scene& scene, const Vec3& goal,
                                  const ScoringConfig& config);

PlanResult select_plan(const UavState& state, const Scene& scene, const Vec3& goal,
                       const PlannerConfig& config);

class Planner {
 public:
  virtual ~Planner() = default;
  virtual std::string_view name() const = 0;
  virtual PlanResult plan(const UavState& state, const Scene& scene, const Vec3& goal) const = 0;
};

class SpsPlanner final : public Planner {
 public:
  explicit SpsPlanner(PlannerConfig config);
  std::string_view name() const override { return "sps"; }
  PlanResult plan(const UavState& state, const Scene& scene, const Vec3& goal) const override;
  const PlannerConfig& config() const { return config_; }

 private:
  PlannerConfig config_;
};

}  // namespace spsnav
