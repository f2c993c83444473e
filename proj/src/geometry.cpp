#include "spsnav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spsnav/errors.hpp"
#include "spsnav/scene.hpp"

namespace spsnav {

Frame Frame::looking_along(const Vec3& origin, const Vec3& forward) {
  const double norm = forward.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw ContractViolation("Frame::looking_along: forward direction must be non-zero");
  const Vec3 x = forward / norm;
  Vec3 y = Vec3::UnitZ().cross(x);
  if (y.norm() < 1e-9) y = x.cross(Vec3::UnitY()).cross(x);  // looking straight up/down
  y.normalize();
  const Vec3 z = x.cross(y);
  Frame f;
  f.origin = origin;
  f.axes.col(0) = x;
  f.axes.col(1) = y;
  f.axes.col(2) = z;
  return f;
}

Vec3 spherical_to_cartesian(const SphericalCoord& c, const Frame& frame) {
  constexpr double tol = 1e-9;
  const Eigen::Matrix3d gram = frame.axes.transpose() * frame.axes;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol)
    throw ContractViolation("spherical_to_cartesian: frame axes are not orthonormal");
  if (frame.axes.determinant() < 0.0)
    throw ContractViolation("spherical_to_cartesian: frame is left-handed");

  const double sp = std::sin(c.phi);
  const Vec3 local(c.r * std::cos(c.phi), c.r * sp * std::cos(c.theta), c.r * sp * std::sin(c.theta));
  return frame.to_world(local);
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

namespace {

double planar_point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Eigen::Vector2d pp = p.head<2>(), aa = a.head<2>(), bb = b.head<2>();
  const Eigen::Vector2d ab = bb - aa;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (pp - aa).norm();
  const double s = std::clamp((pp - aa).dot(ab) / len2, 0.0, 1.0);
  return (pp - (aa + s * ab)).norm();
}

}  // namespace

double point_clearance(const Vec3& p, const Obstacle& obstacle, double t) {
  switch (obstacle.kind) {
    case ObstacleKind::tree_cylinder:
      return (p.head<2>() - obstacle.center.head<2>()).norm() - obstacle.radius;
    case ObstacleKind::dynamic_sphere:
      return (p - obstacle.center_at(t)).norm() - obstacle.radius;
    case ObstacleKind::static_sphere:
      break;
  }
  return (p - obstacle.center).norm() - obstacle.radius;
}

double segment_obstacle_clearance(const Segment& seg, const Obstacle& obstacle, int time_samples) {
  switch (obstacle.kind) {
    case ObstacleKind::static_sphere:
      return point_segment_distance(obstacle.center, seg.a, seg.b) - obstacle.radius;
    case ObstacleKind::tree_cylinder:
      return planar_point_segment_distance(obstacle.center, seg.a, seg.b) - obstacle.radius;
    case ObstacleKind::dynamic_sphere:
      break;
  }
  if (time_samples < 2) throw ContractViolation("segment_obstacle_clearance: time_samples < 2");
  if (obstacle.velocity.isZero(0.0))
    return point_segment_distance(obstacle.center, seg.a, seg.b) - obstacle.radius;

  // Relative motion is linear in t, so work with squared distances and take
  // a single square root at the end.
  const Vec3 vehicle_rate = seg.duration > 0.0 ? Vec3((seg.b - seg.a) / seg.duration) : Vec3::Zero();
  const Vec3 rel0 = seg.a - obstacle.center;
  const Vec3 rel_rate = vehicle_rate - obstacle.velocity;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < time_samples; ++i) {
    const double t = seg.duration * static_cast<double>(i) / static_cast<double>(time_samples - 1);
    best = std::min(best, (rel0 + rel_rate * t).squaredNorm());
  }
  return std::sqrt(best) - obstacle.radius;
}

}  // namespace spsnav
