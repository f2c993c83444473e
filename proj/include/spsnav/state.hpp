#pragma once

#include "spsnav/geometry.hpp"

namespace spsnav {

struct UavState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double time = 0.0;
};

}  // namespace spsnav
