#pragma once

#include "pushrl/object.hpp"
#include "pushrl/robot.hpp"

namespace pushrl {

/// Cuboid lateral faces: 0:+x, 1:+y, 2:-x, 3:-y (object frame). Cylinders
/// use -1; -1 is also reported when there is no contact.
struct ContactInfo {
  bool in_contact{false};
  Vec3 contact_point{0, 0, 0};   // world
  Vec3 inward_normal{1, 0, 0};   // unit, points into the object
  double penetration{0.0};       // m
  int face_index{-1};
  double contact_height{0.0};    // m above ground
};

/// Penalty-contact query between the end-effector point and the object's
/// lateral surface.
ContactInfo resolve_contact(const RobotState& robot, const ObjectParams& params, const ObjectState& state);

}  // namespace pushrl
