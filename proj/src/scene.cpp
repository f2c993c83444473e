#include "spsnav/scene.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "spsnav/errors.hpp"
#include "spsnav/rng.hpp"

namespace spsnav {

namespace {

constexpr int kMaxPlacementAttempts = 10'000;
constexpr double kTwoPi = 6.28318530717958647692;

bool is_finite(const Vec3& v) { return v.allFinite(); }

// Surface-to-surface distance between two obstacles of the same family.
double separation(const Obstacle& a, const Obstacle& b) {
  if (a.kind == ObstacleKind::tree_cylinder || b.kind == ObstacleKind::tree_cylinder)
    return (a.center.head<2>() - b.center.head<2>()).norm() - a.radius - b.radius;
  return (a.center - b.center).norm() - a.radius - b.radius;
}

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("scene: expected a 3-element array");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

std::string_view to_string(ObstacleKind kind) {
  switch (kind) {
    case ObstacleKind::static_sphere: return "static_sphere";
    case ObstacleKind::dynamic_sphere: return "dynamic_sphere";
    case ObstacleKind::tree_cylinder: return "tree_cylinder";
  }
  return "unknown";
}

std::string_view to_string(SceneType type) {
  switch (type) {
    case SceneType::forest: return "forest";
    case SceneType::static_spheres: return "static_spheres";
    case SceneType::mixed_spheres: return "mixed_spheres";
  }
  return "unknown";
}

ObstacleKind obstacle_kind_from_string(std::string_view name) {
  if (name == "static_sphere") return ObstacleKind::static_sphere;
  if (name == "dynamic_sphere") return ObstacleKind::dynamic_sphere;
  if (name == "tree_cylinder") return ObstacleKind::tree_cylinder;
  throw InputError("unknown obstacle kind '" + std::string(name) + "'");
}

SceneType scene_type_from_string(std::string_view name) {
  if (name == "forest") return SceneType::forest;
  if (name == "static_spheres" || name == "static") return SceneType::static_spheres;
  if (name == "mixed_spheres" || name == "mixed") return SceneType::mixed_spheres;
  throw ConfigError("unknown scene type '" + std::string(name) +
                    "' (expected forest, static or mixed)");
}

SceneSpec SceneSpec::defaults(SceneType type, std::uint64_t seed) {
  SceneSpec s;
  s.scene_type = type;
  s.seed = seed;
  switch (type) {
    case SceneType::forest:
      s.obstacle_count = 40;
      s.radius_range = {0.3, 0.6};
      break;
    case SceneType::static_spheres:
      s.obstacle_count = 35;
      s.radius_range = {0.5, 1.5};
      break;
    case SceneType::mixed_spheres:
      s.obstacle_count = 35;
      s.radius_range = {0.5, 1.5};
      s.dynamic_fraction = 0.4;
      s.dynamic_speed_range = {1.0, 4.0};
      break;
  }
  return s;
}

void SceneSpec::validate() const {
  if (!(length > 0.0) || !(width > 0.0) || !(height > 0.0))
    throw ConfigError("scene: corridor length, width and height must be positive");
  if (obstacle_count < 0) throw ConfigError("scene: obstacle_count must be non-negative");
  if (!(radius_range.min > 0.0) || radius_range.max < radius_range.min)
    throw ConfigError("scene: radius_range must satisfy 0 < min <= max");
  if (start_clearance < 0.0) throw ConfigError("scene: start_clearance must be non-negative");
  if (!(dynamic_fraction >= 0.0 && dynamic_fraction <= 1.0))
    throw ConfigError("scene: dynamic_fraction must lie in [0, 1]");
  if (scene_type != SceneType::mixed_spheres && dynamic_fraction != 0.0)
    throw ConfigError("scene: dynamic_fraction must be 0 unless scene_type is mixed_spheres");
  if (dynamic_fraction > 0.0 &&
      (dynamic_speed_range.min < 0.0 || dynamic_speed_range.max < dynamic_speed_range.min))
    throw ConfigError("scene: dynamic_speed_range must satisfy 0 <= min <= max");
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  Scene scene;
  scene.spec = spec;
  scene.bounds = Box(Vec3::Zero(), Vec3(spec.length, spec.width, spec.height));
  scene.start = Vec3(0.0, spec.width / 2, spec.height / 2);
  scene.goal = Vec3(spec.length, spec.width / 2, spec.height / 2);

  const bool forest = spec.scene_type == SceneType::forest;
  const int dynamic_count =
      static_cast<int>(std::lround(spec.dynamic_fraction * static_cast<double>(spec.obstacle_count)));

  SplitMix64 rng(spec.seed);
  scene.obstacles.reserve(static_cast<std::size_t>(spec.obstacle_count));
  for (int i = 0; i < spec.obstacle_count; ++i) {
    Obstacle o;
    o.kind = forest ? ObstacleKind::tree_cylinder
                    : (i < dynamic_count ? ObstacleKind::dynamic_sphere : ObstacleKind::static_sphere);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      o.radius = rng.uniform(spec.radius_range.min, spec.radius_range.max);
      o.center = Vec3(rng.uniform(0.0, spec.length), rng.uniform(0.0, spec.width),
                      forest ? 0.0 : rng.uniform(0.0, spec.height));
      Obstacle start_probe;
      start_probe.kind = o.kind;
      start_probe.center = scene.start;
      start_probe.radius = 0.0;
      if (separation(o, start_probe) <= spec.start_clearance) continue;
      placed = true;
      for (const Obstacle& other : scene.obstacles) {
        if (separation(o, other) < 0.0) {
          placed = false;
          break;
        }
      }
    }
    if (!placed)
      throw GenerationError("generate_scene: could not place obstacle " + std::to_string(i) +
                            " after " + std::to_string(kMaxPlacementAttempts) + " samples");
    if (o.kind == ObstacleKind::dynamic_sphere) {
      const double heading = rng.uniform(0.0, kTwoPi);
      const double speed = rng.uniform(spec.dynamic_speed_range.min, spec.dynamic_speed_range.max);
      o.velocity = Vec3(0.0, speed * std::cos(heading), speed * std::sin(heading));
    }
    scene.obstacles.push_back(o);
  }
  return scene;
}

Scene advance_obstacles(Scene scene, double dt) {
  if (!(dt >= 0.0)) throw ContractViolation("advance_obstacles: dt must be non-negative");
  const Vec3 lo = scene.bounds.min(), hi = scene.bounds.max();
  for (Obstacle& o : scene.obstacles) {
    if (o.kind != ObstacleKind::dynamic_sphere) continue;
    o.center += o.velocity * dt;
    for (int axis = 1; axis < 3; ++axis) {
      if (o.center[axis] > hi[axis]) {
        o.center[axis] = 2.0 * hi[axis] - o.center[axis];
        o.velocity[axis] = -std::abs(o.velocity[axis]);
      } else if (o.center[axis] < lo[axis]) {
        o.center[axis] = 2.0 * lo[axis] - o.center[axis];
        o.velocity[axis] = std::abs(o.velocity[axis]);
      }
    }
  }
  return scene;
}

NearestObstacle nearest_clearance(const Vec3& p, const Scene& scene) {
  NearestObstacle best;
  for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
    const double c = point_clearance(p, scene.obstacles[i]);
    if (c < best.clearance) {
      best.clearance = c;
      best.index = i;
    }
  }
  return best;
}

std::string scene_to_json(const Scene& scene) {
  using nlohmann::json;
  const SceneSpec& s = scene.spec;
  json doc;
  doc["scene_type"] = to_string(s.scene_type);
  doc["spec"] = {{"length", s.length},
                 {"width", s.width},
                 {"height", s.height},
                 {"obstacle_count", s.obstacle_count},
                 {"radius_range", {s.radius_range.min, s.radius_range.max}},
                 {"dynamic_fraction", s.dynamic_fraction},
                 {"dynamic_speed_range", {s.dynamic_speed_range.min, s.dynamic_speed_range.max}},
                 {"start_clearance", s.start_clearance},
                 {"seed", s.seed}};
  doc["bounds"] = {{"min", vec_json(scene.bounds.min())}, {"max", vec_json(scene.bounds.max())}};
  doc["start"] = vec_json(scene.start);
  doc["goal"] = vec_json(scene.goal);
  json obstacles = json::array();
  for (const Obstacle& o : scene.obstacles) {
    obstacles.push_back({{"kind", to_string(o.kind)},
                         {"center", vec_json(o.center)},
                         {"radius", o.radius},
                         {"velocity", vec_json(o.velocity)}});
  }
  doc["obstacles"] = std::move(obstacles);
  return doc.dump(2);
}

Scene scene_from_json(std::string_view text) {
  using nlohmann::json;
  try {
    const json doc = json::parse(text);
    Scene scene;
    SceneSpec& s = scene.spec;
    s.scene_type = scene_type_from_string(doc.at("scene_type").get<std::string>());
    const json& js = doc.at("spec");
    s.length = js.at("length").get<double>();
    s.width = js.at("width").get<double>();
    s.height = js.at("height").get<double>();
    s.obstacle_count = js.at("obstacle_count").get<int>();
    s.radius_range = {js.at("radius_range").at(0).get<double>(), js.at("radius_range").at(1).get<double>()};
    s.dynamic_fraction = js.at("dynamic_fraction").get<double>();
    s.dynamic_speed_range = {js.at("dynamic_speed_range").at(0).get<double>(),
                             js.at("dynamic_speed_range").at(1).get<double>()};
    s.start_clearance = js.value("start_clearance", s.start_clearance);
    s.seed = js.at("seed").get<std::uint64_t>();
    scene.bounds = Box(vec_from_json(doc.at("bounds").at("min")), vec_from_json(doc.at("bounds").at("max")));
    scene.start = vec_from_json(doc.at("start"));
    scene.goal = vec_from_json(doc.at("goal"));
    for (const json& jo : doc.at("obstacles")) {
      Obstacle o;
      o.kind = obstacle_kind_from_string(jo.at("kind").get<std::string>());
      o.center = vec_from_json(jo.at("center"));
      o.radius = jo.at("radius").get<double>();
      o.velocity = vec_from_json(jo.at("velocity"));
      if (!(o.radius > 0.0) || !is_finite(o.center) || !is_finite(o.velocity))
        throw InputError("scene: obstacle with non-positive radius or non-finite state");
      scene.obstacles.push_back(o);
    }
    return scene;
  } catch (const json::exception& e) {
    throw InputError(std::string("scene: malformed document: ") + e.what());
  } catch (const ConfigError& e) {
    throw InputError(e.what());
  }
}

}  // namespace spsnav
