#pragma once

#include <Eigen/Core>

namespace spsnav {

// World frame: x forward (toward the goal), y lateral, z up. Meters.
using Vec3 = Eigen::Vector3d;

struct Obstacle;

struct SphericalCoord {
  double r = 1.0;      // radius [m]
  double phi = 0.0;    // steering deviation from the forward axis [rad]
  double theta = 0.0;  // azimuth around the forward axis [rad]
};

// Orthonormal right-handed basis anchored at `origin`. Columns of `axes` are
// the local forward, lateral and vertical unit vectors in world coordinates.
struct Frame {
  Vec3 origin = Vec3::Zero();
  Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();

  static Frame identity() { return {}; }

  // Forward axis along `forward`; lateral axis is world-up x forward so a
  // goal-aligned frame coincides with the world frame. Falls back to world y
  // as the reference when `forward` is (nearly) vertical.
  static Frame looking_along(const Vec3& origin, const Vec3& forward);

  Vec3 to_world(const Vec3& local) const { return origin + axes * local; }
  Vec3 to_local(const Vec3& world) const { return axes.transpose() * (world - origin); }
};

struct Segment {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double duration = 0.0;  // seconds to traverse a->b at constant speed

  Vec3 point_at(double t) const {
    if (duration <= 0.0) return a;
    return a + (b - a) * (t / duration);
  }
};

inline constexpr double kMaxSteering = 3.14159265358979323846 / 15.0;
inline constexpr int kDefaultTimeSamples = 64;

// Local (r cos phi, r sin phi cos theta, r sin phi sin theta), mapped into
// `frame`. Throws ContractViolation for a non-orthonormal or left-handed frame.
Vec3 spherical_to_cartesian(const SphericalCoord& c, const Frame& frame);

// Euclidean distance from p to the closed segment [a, b].
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

// Distance from p to the surface of `obstacle` at time offset t (negative inside).
double point_clearance(const Vec3& p, const Obstacle& obstacle, double t = 0.0);

// Signed clearance between a path segment and an obstacle surface. Static
// spheres and tree cylinders are exact; moving spheres take the minimum over
// `time_samples` synchronized instants in [0, seg.duration].
double segment_obstacle_clearance(const Segment& seg, const Obstacle& obstacle,
                                  int time_samples = kDefaultTimeSamples);

}  // namespace spsnav
