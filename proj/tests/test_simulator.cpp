#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spsnav/batch.hpp"
#include "spsnav/errors.hpp"
#include "spsnav/simulator.hpp"

using namespace spsnav;

namespace {

Scene empty_corridor() {
  SceneSpec spec = SceneSpec::defaults(SceneType::static_spheres);
  spec.obstacle_count = 0;
  return generate_scene(spec);
}

double path_length(const std::vector<TrajectorySample>& traj) {
  double len = 0;
  for (std::size_t i = 1; i < traj.size(); ++i) len += (traj[i].position - traj[i - 1].position).norm();
  return len;
}

std::string trajectory_text(const TrialRecord& r) {
  std::ostringstream os;
  write_trajectory_csv(os, r.trajectory);
  return os.str();
}

}  // namespace

TEST_CASE("step_dynamics examples") {
  const StepResult a = step_dynamics({Vec3::Zero(), Vec3::Zero(), 0}, Vec3(17, 0, 0), 0.05, 0.2);
  CHECK(a.state.velocity.isApprox(Vec3(4.25, 0, 0)));
  CHECK(a.acceleration.isApprox(Vec3(85, 0, 0)));

  const StepResult fixed = step_dynamics({Vec3(1, 2, 3), Vec3(3, 4, 0), 0}, Vec3(3, 4, 0), 0.05, 0.2);
  CHECK(fixed.state.velocity == Vec3(3, 4, 0));
  CHECK(fixed.acceleration.isZero());

  const StepResult turn = step_dynamics({Vec3::Zero(), Vec3(10, 0, 0), 0}, Vec3(0, 10, 0), 0.05, 0.2);
  CHECK(turn.state.velocity.isApprox(Vec3(7.5, 2.5, 0)));
  CHECK_THROWS_AS(step_dynamics({}, Vec3::Zero(), 0.0, 0.2), ContractViolation);
}

TEST_CASE("empty corridor: both planners succeed on a near-straight path") {
  const Scene scene = empty_corridor();
  const TrialConfig cfg;
  const SpsPlanner sps{PlannerConfig{}};
  const GridPlanner grid{GridConfig{}};
  for (const Planner* p : {static_cast<const Planner*>(&sps), static_cast<const Planner*>(&grid)}) {
    const TrialRecord r = run_trial(scene, *p, cfg, 1);
    CHECK(r.outcome == Outcome::success);
    CHECK(path_length(r.trajectory) <= 1.02 * 60.0 + 17.0 * cfg.dt);
    CHECK(std::isinf(r.min_clearance));
  }
}

TEST_CASE("solid wall: never a success") {
  Scene scene = empty_corridor();
  for (int y = 0; y <= 20; ++y)
    for (int z = 0; z <= 10; ++z) {
      Obstacle o;
      o.center = Vec3(30, y, z);
      o.radius = 0.6;
      scene.obstacles.push_back(o);
    }
  const TrialRecord sps = run_trial(scene, SpsPlanner{PlannerConfig{}}, TrialConfig{}, 0);
  const TrialRecord grid = run_trial(scene, GridPlanner{GridConfig{}}, TrialConfig{}, 0);
  CHECK(sps.outcome != Outcome::success);
  CHECK(grid.outcome != Outcome::success);
  CHECK(sps.relaxations_total > 0);
}

TEST_CASE("run_trial is deterministic") {
  const Scene scene = generate_scene(SceneSpec::defaults(SceneType::static_spheres, 42));
  const SpsPlanner planner{PlannerConfig{}};
  const TrialRecord a = run_trial(scene, planner, TrialConfig{}, 42);
  const TrialRecord b = run_trial(scene, planner, TrialConfig{}, 42);
  CHECK(a.outcome == b.outcome);
  CHECK(a.min_clearance == b.min_clearance);
  CHECK(a.max_accel == b.max_accel);
  CHECK(a.mean_accel == b.mean_accel);
  CHECK(a.candidates_evaluated_total == b.candidates_evaluated_total);
  CHECK(trajectory_text(a) == trajectory_text(b));
  CHECK(a.candidates_evaluated_total == 32 * a.replans);
}

TEST_CASE("trial record invariants over random scenes") {
  const TrialConfig cfg;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (const SceneType type : {SceneType::forest, SceneType::mixed_spheres}) {
      const Scene scene = generate_scene(SceneSpec::defaults(type, seed));
      const auto planner = make_planner("sps", 13.0, type, PlannerConfig{}, GridConfig{});
      TrialConfig c = cfg;
      c.v_set = 13.0;
      const TrialRecord r = run_trial(scene, *planner, c, seed);
      CHECK((r.outcome == Outcome::success) == (r.trajectory.back().position.x() >= 60.0));
      if (r.outcome == Outcome::success) CHECK(r.min_clearance >= 0.0);
      if (r.outcome == Outcome::collision) CHECK(r.min_clearance < 0.0);
      CHECK(r.mean_accel <= r.max_accel);
      for (std::size_t i = 1; i < r.trajectory.size(); ++i)
        CHECK(r.trajectory[i].t > r.trajectory[i - 1].t);
    }
  }
}

TEST_CASE("trajectory CSV format") {
  std::ostringstream os;
  write_trajectory_csv(os, {{0.5, Vec3(1, 2, 3), Vec3(17, 0, 0), Vec3(0, 0.125, 0)}});
  CHECK(os.str() == "t,x,y,z,vx,vy,vz,ax,ay,az\n0.5,1,2,3,17,0,0,0,0.125,0\n");
}

TEST_CASE("outcome names round trip") {
  for (const Outcome o : {Outcome::success, Outcome::collision, Outcome::timeout, Outcome::out_of_bounds})
    CHECK(outcome_from_string(to_string(o)) == o);
  CHECK_THROWS_AS(outcome_from_string("crash"), InputError);
}

TEST_CASE("batch: matched seeds, aggregates and determinism") {
  BatchConfig cfg;
  cfg.scenes = {SceneSpec::defaults(SceneType::static_spheres)};
  cfg.speeds = {9.0};
  cfg.trials_per_cell = 4;
  cfg.export_trajectories = 1;
  const BatchResult a = run_batch(cfg);
  REQUIRE(a.records.size() == 8);
  CHECK(a.trajectories.size() == 2);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.records[i].planner == "grid");
    CHECK(a.records[i + 4].planner == "sps");
    CHECK(a.records[i].seed == a.records[i + 4].seed);
  }
  REQUIRE(a.metrics.size() == 2);
  for (const CellMetrics& m : a.metrics) CHECK(m.trials == 4);

  cfg.jobs = 3;
  const BatchResult b = run_batch(cfg);
  REQUIRE(b.records.size() == a.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].seed == b.records[i].seed);
    CHECK(a.records[i].outcome == b.records[i].outcome);
    CHECK(a.records[i].max_accel == b.records[i].max_accel);
  }

  cfg.trials_per_cell = 0;
  CHECK_THROWS_AS(run_batch(cfg), ConfigError);
}

TEST_CASE("aggregate arithmetic") {
  std::vector<TrialSummary> recs;
  for (int i = 0; i < 10; ++i) {
    TrialSummary s;
    s.speed = 5;
    s.planner = "sps";
    s.trial_index = i;
    s.outcome = i < 8 ? Outcome::success : Outcome::collision;
    s.mean_accel = i;
    s.max_accel = 2.0 * i;
    s.candidates_evaluated_total = 64;
    s.replans = 2;
    recs.push_back(s);
  }
  const auto m = aggregate(recs);
  REQUIRE(m.size() == 1);
  CHECK(m[0].success_rate == doctest::Approx(0.8));
  CHECK(m[0].mean_accel == doctest::Approx(4.5));
  CHECK(m[0].max_accel == doctest::Approx(9.0));
  CHECK(m[0].mean_candidates == doctest::Approx(32.0));

  std::reverse(recs.begin(), recs.end());
  CHECK(aggregate(recs)[0].success_rate == m[0].success_rate);
}

TEST_CASE("make_planner") {
  CHECK(make_planner("sps", 5, SceneType::forest, {}, {})->name() == "sps");
  CHECK(make_planner("grid", 5, SceneType::forest, {}, {})->name() == "grid");
  CHECK_THROWS(make_planner("warp9", 5, SceneType::forest, {}, {}));
}
