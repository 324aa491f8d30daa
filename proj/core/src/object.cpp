#include "pushrl/object.hpp"

#include <algorithm>
#include <cmath>

namespace pushrl {

Vec3 ObjectParams::principal_inertia() const {
  const double dx = dims.x(), dy = dims.y(), dz = dims.z();
  if (shape == Shape::kCuboid) {
    return {mass * (dy * dy + dz * dz) / 12.0,
            mass * (dx * dx + dz * dz) / 12.0,
            mass * (dx * dx + dy * dy) / 12.0};
  }
  const double r = radius();
  const double transverse = mass * (3.0 * r * r + dz * dz) / 12.0;
  return {transverse, transverse, 0.5 * mass * r * r};
}

double support_half_extent(const ObjectParams& params, double yaw, const Vec2& d) {
  if (params.shape == Shape::kCylinder) return params.radius();
  const Vec2 d_obj = rotate2(-yaw, d);
  // Pivot about the bottom edge of the dominant-axis face.
  if (std::abs(d_obj.x()) >= std::abs(d_obj.y())) return 0.5 * params.dims.x();
  return 0.5 * params.dims.y();
}

ObjectFrame object_frame(const ObjectParams& params, const ObjectState& state) {
  ObjectFrame f;
  const Mat3 r_yaw = rot_z(state.planar_pose.yaw);
  const Vec3 centroid_upright(state.planar_pose.x, state.planar_pose.y, 0.5 * params.dims.z());
  if (state.tilt.angle <= 0.0) {
    f.rotation = r_yaw;
    f.centroid = centroid_upright;
    return f;
  }
  const Vec3 axis(std::cos(state.tilt.axis_yaw), std::sin(state.tilt.axis_yaw), 0.0);
  const Mat3 r_tilt = Eigen::AngleAxisd(state.tilt.angle, axis).toRotationMatrix();
  const Vec2 fall = tilt_fall_direction(state.tilt.axis_yaw);
  const double r_e = support_half_extent(params, state.planar_pose.yaw, fall);
  const Vec3 pivot(state.planar_pose.x + r_e * fall.x(), state.planar_pose.y + r_e * fall.y(), 0.0);
  f.rotation = r_tilt * r_yaw;
  f.centroid = pivot + r_tilt * (centroid_upright - pivot);
  return f;
}

namespace {

std::array<Vec3, 8> box_corners(const Vec3& dims) {
  // Lexicographic in (z, y, x): z varies slowest, x fastest, minus first.
  std::array<Vec3, 8> c;
  int i = 0;
  for (int sz : {-1, 1})
    for (int sy : {-1, 1})
      for (int sx : {-1, 1})
        c[i++] = Vec3(0.5 * sx * dims.x(), 0.5 * sy * dims.y(), 0.5 * sz * dims.z());
  return c;
}

}  // namespace

std::array<Vec3, 8> obb_keypoints(const ObjectParams& params, const ObjectState& state) {
  const ObjectFrame f = object_frame(params, state);
  std::array<Vec3, 8> out = box_corners(params.dims);
  for (auto& p : out) p = f.to_world(p);
  return out;
}

std::array<Vec3, 8> goal_keypoints(const ObjectParams& params, const Pose2& goal) {
  ObjectState upright;
  upright.planar_pose = goal;
  return obb_keypoints(params, upright);
}

double keypoint_distance(const std::array<Vec3, 8>& a, const std::array<Vec3, 8>& b) {
  double sq = 0.0;
  for (int i = 0; i < 8; ++i) sq += (a[i] - b[i]).squaredNorm();
  return std::sqrt(sq);
}

Vec3 surface_sample(const ObjectParams& params, Rng& rng) {
  const double z = rng.uniform(0.0, params.dims.z());
  if (params.shape == Shape::kCylinder) {
    const double a = rng.uniform(-kPi, kPi);
    const double r = params.radius();
    return {r * std::cos(a), r * std::sin(a), z};
  }
  // Lateral faces weighted by area; dz is common so weights reduce to dx/dy.
  const double dx = params.dims.x(), dy = params.dims.y();
  const double u = rng.uniform(0.0, 2.0 * (dx + dy));
  if (u < 2.0 * dy) {
    // +x or -x face, spanning y in [-dy/2, dy/2].
    const double sign = (u < dy) ? 1.0 : -1.0;
    const double y = std::fmod(u, dy) - 0.5 * dy;
    return {sign * 0.5 * dx, y, z};
  }
  const double v = u - 2.0 * dy;
  const double sign = (v < dx) ? 1.0 : -1.0;
  const double x = std::fmod(v, dx) - 0.5 * dx;
  return {x, sign * 0.5 * dy, z};
}

Vec3 object_point_to_world(const ObjectParams& params, const ObjectState& state, const Vec3& p_bottom_frame) {
  const ObjectFrame f = object_frame(params, state);
  const Vec3 centered(p_bottom_frame.x(), p_bottom_frame.y(), p_bottom_frame.z() - 0.5 * params.dims.z());
  return f.to_world(centered);
}

}  // namespace pushrl
