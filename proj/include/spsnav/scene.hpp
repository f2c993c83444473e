#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Geometry>

#include "spsnav/geometry.hpp"

namespace spsnav {

enum class ObstacleKind { static_sphere, dynamic_sphere, tree_cylinder };
enum class SceneType { forest, static_spheres, mixed_spheres };

std::string_view to_string(ObstacleKind kind);
std::string_view to_string(SceneType type);
ObstacleKind obstacle_kind_from_string(std::string_view name);
// Accepts the canonical names plus the CLI short forms "static" and "mixed".
SceneType scene_type_from_string(std::string_view name);

struct Obstacle {
  ObstacleKind kind = ObstacleKind::static_sphere;
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
  Vec3 velocity = Vec3::Zero();  // zero unless dynamic_sphere

  // Center position t seconds from now, assuming straight-line motion.
  Vec3 center_at(double t) const { return center + velocity * t; }
};

struct Range {
  double min = 0.0;
  double max = 0.0;
};

using Box = Eigen::AlignedBox3d;

struct SceneSpec {
  SceneType scene_type = SceneType::static_spheres;
  double length = 60.0;
  double width = 20.0;
  double height = 10.0;
  int obstacle_count = 35;
  Range radius_range{0.5, 1.5};
  double dynamic_fraction = 0.0;
  Range dynamic_speed_range{0.0, 0.0};
  double start_clearance = 5.0;  // obstacle-free disc around the start [m]
  std::uint64_t seed = 0;

  // Benchmark defaults for each environment type.
  static SceneSpec defaults(SceneType type, std::uint64_t seed = 0);
  void validate() const;  // throws ConfigError
};

struct Scene {
  SceneSpec spec;
  Vec3 start = Vec3::Zero();
  Vec3 goal = Vec3::Zero();
  std::vector<Obstacle> obstacles;
  Box bounds;
};

// Deterministic in `spec` (including its seed). Throws GenerationError when an
// obstacle cannot be placed within the rejection budget.
Scene generate_scene(const SceneSpec& spec);

// Straight-line motion of dynamic spheres with elastic reflection at the
// lateral and vertical bounds. Static obstacles are untouched.
Scene advance_obstacles(Scene scene, double dt);

struct NearestObstacle {
  double clearance = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> index;
};

NearestObstacle nearest_clearance(const Vec3& p, const Scene& scene);

// Human-readable JSON document; see docs in README for the schema.
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(std::string_view text);

}  // namespace spsnav
