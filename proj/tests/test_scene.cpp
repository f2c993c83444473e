#include <doctest.h>

#include <cmath>
#include <limits>

#include "spsnav/errors.hpp"
#include "spsnav/scene.hpp"

using namespace spsnav;

namespace {

Scene empty_scene() {
  SceneSpec spec = SceneSpec::defaults(SceneType::static_spheres);
  spec.obstacle_count = 0;
  return generate_scene(spec);
}

Obstacle ball(const Vec3& c, double r, const Vec3& v = Vec3::Zero()) {
  Obstacle o;
  o.kind = v.isZero() ? ObstacleKind::static_sphere : ObstacleKind::dynamic_sphere;
  o.center = c;
  o.radius = r;
  o.velocity = v;
  return o;
}

bool same_scene(const Scene& a, const Scene& b) {
  if (a.obstacles.size() != b.obstacles.size()) return false;
  for (std::size_t i = 0; i < a.obstacles.size(); ++i) {
    const Obstacle &x = a.obstacles[i], &y = b.obstacles[i];
    if (x.kind != y.kind || x.center != y.center || x.radius != y.radius || x.velocity != y.velocity)
      return false;
  }
  return a.start == b.start && a.goal == b.goal && a.bounds.min() == b.bounds.min() &&
         a.bounds.max() == b.bounds.max();
}

}  // namespace

TEST_CASE("scene type names") {
  CHECK(scene_type_from_string("forest") == SceneType::forest);
  CHECK(scene_type_from_string("static") == SceneType::static_spheres);
  CHECK(scene_type_from_string("mixed_spheres") == SceneType::mixed_spheres);
  CHECK(to_string(SceneType::mixed_spheres) == "mixed_spheres");
  CHECK_THROWS_AS(scene_type_from_string("desert"), ConfigError);
}

TEST_CASE("generate_scene basics") {
  const Scene empty = empty_scene();
  CHECK(empty.obstacles.empty());
  CHECK(empty.start.isApprox(Vec3(0, 10, 5)));
  CHECK(empty.goal.x() == 60.0);

  const SceneSpec spec = SceneSpec::defaults(SceneType::mixed_spheres, 123);
  CHECK(same_scene(generate_scene(spec), generate_scene(spec)));
  SceneSpec other = spec;
  other.seed = 124;
  CHECK_FALSE(same_scene(generate_scene(spec), generate_scene(other)));
}

TEST_CASE("static spheres respect radius range and bounds") {
  SceneSpec spec = SceneSpec::defaults(SceneType::static_spheres, 99);
  spec.obstacle_count = 30;
  spec.radius_range = {0.5, 1.5};
  const Scene scene = generate_scene(spec);
  REQUIRE(scene.obstacles.size() == 30);
  for (const Obstacle& o : scene.obstacles) {
    CHECK(o.kind == ObstacleKind::static_sphere);
    CHECK(o.radius >= 0.5);
    CHECK(o.radius <= 1.5);
    CHECK(scene.bounds.contains(o.center));
    CHECK((o.center - scene.start).norm() - o.radius > spec.start_clearance);
  }
}

TEST_CASE("default specs per scene type") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene forest = generate_scene(SceneSpec::defaults(SceneType::forest, seed));
    CHECK(forest.obstacles.size() == 40);
    for (const Obstacle& o : forest.obstacles) {
      CHECK(o.kind == ObstacleKind::tree_cylinder);
      CHECK(o.radius >= 0.3);
      CHECK(o.radius <= 0.6);
    }
    const Scene mixed = generate_scene(SceneSpec::defaults(SceneType::mixed_spheres, seed));
    int dynamic = 0;
    for (const Obstacle& o : mixed.obstacles) {
      if (o.kind != ObstacleKind::dynamic_sphere) continue;
      ++dynamic;
      CHECK(o.velocity.norm() >= 1.0 - 1e-12);
      CHECK(o.velocity.norm() <= 4.0 + 1e-12);
    }
    CHECK(dynamic == 14);
  }
}

TEST_CASE("generate_scene errors") {
  SceneSpec crowded = SceneSpec::defaults(SceneType::static_spheres, 1);
  crowded.length = 4;
  crowded.width = 4;
  crowded.height = 4;
  crowded.start_clearance = 0;
  crowded.obstacle_count = 50;
  CHECK_THROWS_AS(generate_scene(crowded), GenerationError);

  SceneSpec bad = SceneSpec::defaults(SceneType::static_spheres);
  bad.radius_range = {2.0, 1.0};
  CHECK_THROWS_AS(generate_scene(bad), ConfigError);
  bad = SceneSpec::defaults(SceneType::static_spheres);
  bad.dynamic_fraction = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("advance_obstacles") {
  Scene scene = empty_scene();
  scene.obstacles.push_back(ball(Vec3(5, 4, 3), 1.0));
  const Scene still = advance_obstacles(scene, 1.0);
  CHECK(same_scene(scene, still));

  scene.obstacles.push_back(ball(Vec3(5, 4, 0), 1.0, Vec3(0, -4, 0)));
  const Scene moved = advance_obstacles(scene, 0.05);
  CHECK(moved.obstacles[1].center.isApprox(Vec3(5, 3.8, 0), 1e-14));

  Scene edge = empty_scene();
  edge.obstacles.push_back(ball(Vec3(30, 19.99, 5), 1.0, Vec3(0, 2, 0)));
  const Scene bounced = advance_obstacles(edge, 0.01);
  CHECK(bounced.obstacles[0].velocity.y() < 0);
  CHECK(bounced.obstacles[0].center.y() <= 20.0);
  CHECK_THROWS_AS(advance_obstacles(edge, -1.0), ContractViolation);
}

TEST_CASE("nearest_clearance") {
  Scene scene = empty_scene();
  const NearestObstacle none = nearest_clearance(Vec3(1, 2, 3), scene);
  CHECK(std::isinf(none.clearance));
  CHECK_FALSE(none.index.has_value());

  scene.obstacles.push_back(ball(Vec3(20, 10, 5), 2.0));
  const NearestObstacle inside = nearest_clearance(Vec3(20, 10, 5), scene);
  CHECK(inside.clearance == doctest::Approx(-2.0));
  REQUIRE(inside.index.has_value());
  CHECK(*inside.index == 0);
  CHECK(nearest_clearance(Vec3(20, 17, 5), scene).clearance == doctest::Approx(5.0));
}

TEST_CASE("scene JSON round trip") {
  const Scene scene = generate_scene(SceneSpec::defaults(SceneType::mixed_spheres, 5));
  const Scene back = scene_from_json(scene_to_json(scene));
  CHECK(same_scene(scene, back));
  CHECK(back.spec.seed == 5);
  CHECK_THROWS_AS(scene_from_json("{not json"), InputError);
  CHECK_THROWS_AS(scene_from_json("{}"), InputError);
}
