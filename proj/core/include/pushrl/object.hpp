#pragma once

#include <array>

#include "pushrl/rng.hpp"
#include "pushrl/types.hpp"

namespace pushrl {

enum class Shape { kCuboid, kCylinder };

/// Physical properties of the pushed object. For cylinders dims.x == dims.y
/// holds (diameter) and dims.z is the height.
struct ObjectParams {
  Shape shape{Shape::kCuboid};
  Vec3 dims{0.5, 0.5, 0.5};     // m
  double mass{5.0};             // kg
  Vec3 com_offset{0, 0, 0};     // m, relative to the geometric centroid
  double mu_ground{0.8};        // combined object-floor friction
  double mu_contact{0.8};       // EE-object friction

  double footprint_half_extent(int axis) const { return 0.5 * dims[axis]; }
  double radius() const { return 0.5 * dims.x(); }
  double height() const { return dims.z(); }

  /// CoM height above the ground when the object stands upright.
  double com_height() const { return 0.5 * dims.z() + com_offset.z(); }

  /// Principal moments of inertia about the centroid, uniform density.
  Vec3 principal_inertia() const;
};

/// Tilt about a horizontal axis through the active support edge.
struct TiltState {
  double angle{0.0};     // rad, >= 0
  double axis_yaw{0.0};  // world yaw of the rotation axis
};

struct ObjectState {
  Pose2 planar_pose{};   // support-footprint center and heading
  TiltState tilt{};
  Vec2 lin_vel{0, 0};    // m/s, world frame
  double yaw_rate{0.0};  // rad/s
  bool toppled{false};
};

/// World-frame pose of the object body: full rotation (tilt composed on yaw)
/// and the centroid position, accounting for the pivot about the support
/// edge while tilted.
struct ObjectFrame {
  Mat3 rotation;   // world_R_object
  Vec3 centroid;   // world position of the geometric centroid

  Vec3 to_world(const Vec3& p_obj) const { return centroid + rotation * p_obj; }
  Vec3 to_object(const Vec3& p_world) const { return rotation.transpose() * (p_world - centroid); }
};

/// Horizontal direction the object tips toward for a given tilt axis.
inline Vec2 tilt_fall_direction(double axis_yaw) {
  return {std::sin(axis_yaw), -std::cos(axis_yaw)};
}

/// Distance from the footprint center to the support edge along a horizontal
/// direction (the edge the object would pivot about when tipping toward d).
double support_half_extent(const ObjectParams& params, double yaw, const Vec2& d);

ObjectFrame object_frame(const ObjectParams& params, const ObjectState& state);

/// The 8 vertices of the oriented bounding box in a fixed order: sign
/// combinations of +-dims/2 sorted lexicographically by (z, y, x), minus
/// before plus, transformed by the full object rotation.
std::array<Vec3, 8> obb_keypoints(const ObjectParams& params, const ObjectState& state);

/// Keypoints of an upright box at a planar goal pose (same vertex order).
std::array<Vec3, 8> goal_keypoints(const ObjectParams& params, const Pose2& goal);

/// Euclidean norm of the stacked 24-vector keypoint difference.
double keypoint_distance(const std::array<Vec3, 8>& a, const std::array<Vec3, 8>& b);

/// Uniform sample over the lateral (vertical) surface, in an object frame
/// anchored at the footprint center: z in [0, dims.z].
Vec3 surface_sample(const ObjectParams& params, Rng& rng);

/// Converts a bottom-anchored object-frame point (as produced by
/// surface_sample) to world coordinates.
Vec3 object_point_to_world(const ObjectParams& params, const ObjectState& state, const Vec3& p_bottom_frame);

}  // namespace pushrl
