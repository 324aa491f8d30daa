#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace pushrl {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;

/// Planar pose: position on the ground plane plus heading.
struct Pose2 {
  double x{0.0};
  double y{0.0};
  double yaw{0.0};
};

/// Wraps an angle to (-pi, pi]. In-range values pass through unchanged.
inline double wrap_angle(double a) {
  if (a > -kPi && a <= kPi) return a;
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

inline Mat3 rot_z(double yaw) {
  return Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
}

inline Mat3 rot_y(double pitch) {
  return Eigen::AngleAxisd(pitch, Vec3::UnitY()).toRotationMatrix();
}

inline Mat3 rot_x(double roll) {
  return Eigen::AngleAxisd(roll, Vec3::UnitX()).toRotationMatrix();
}

/// z-component of the planar cross product r x f.
inline double cross2(const Vec2& r, const Vec2& f) { return r.x() * f.y() - r.y() * f.x(); }

inline Vec2 rotate2(double yaw, const Vec2& v) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

template <typename T>
inline T clamp(T v, T lo, T hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace pushrl
