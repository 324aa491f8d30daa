#pragma once

#include "pushrl/types.hpp"

namespace pushrl {

inline constexpr int kArmJoints = 5;
inline constexpr int kBaseCmdDim = 6;

using ArmVec = Eigen::Matrix<double, kArmJoints, 1>;
using BaseCmd = Eigen::Matrix<double, kBaseCmdDim, 1>;  // (vx, vy, wz, roll, pitch, height)

/// Kinematic and actuation description of the 5-joint arm: yaw shoulder,
/// three pitch joints, yaw wrist, with the end-effector offset along the
/// last link axis. All links extend along local +x at the zero configuration.
struct ArmModel {
  Vec3 shoulder_offset{0.30, 0.0, 0.10};  // in the base frame
  double link1{0.30};
  double link2{0.30};
  double link3{0.25};
  double ee_offset{0.10};
  ArmVec q_default{(ArmVec() << 0.0, 0.6, -1.2, 0.6, 0.0).finished()};
  ArmVec q_lower{(ArmVec() << -2.9, -0.3, -2.5, -2.2, -2.9).finished()};
  ArmVec q_upper{(ArmVec() << 2.9, 1.6, 2.5, 2.2, 2.9).finished()};
  double rate_limit{2.0};       // rad/s
  double torque_limit{30.0};    // N m, nominal
  double impedance_kp{40.0};    // torque proxy tau = kp (q_cmd - q) - kd qdot
  double impedance_kd{2.0};
};

/// Abstracted mobile base plus arm. Linear velocity is expressed in the base
/// frame; the base never leaves the plane and cannot fall.
struct RobotState {
  Pose2 base_pose{};
  double base_height{0.5};
  double base_roll{0.0};
  double base_pitch{0.0};
  Vec2 base_lin_vel{0, 0};      // base frame
  double base_yaw_rate{0.0};
  ArmVec q_arm{ArmVec::Zero()};
  ArmVec qd_arm{ArmVec::Zero()};
  ArmVec tau_arm{ArmVec::Zero()};
  Vec3 ee_pos_world{0, 0, 0};
};

/// world_R_base for the full base orientation (yaw-pitch-roll).
inline Mat3 base_rotation(const RobotState& r) {
  return rot_z(r.base_pose.yaw) * rot_y(r.base_pitch) * rot_x(r.base_roll);
}

inline Vec3 base_origin(const RobotState& r) {
  return {r.base_pose.x, r.base_pose.y, r.base_height};
}

/// End-effector world position for the homogeneous-transform chain
///   base -> shoulder mount -> Rz(q1) Ry(q2) L1 Ry(q3) L2 Ry(q4) L3 Rz(q5) EE.
Vec3 forward_kinematics(const ArmModel& arm, const Pose2& base_pose, double base_height,
                        double base_roll, double base_pitch, const ArmVec& q_arm);

inline Vec3 forward_kinematics(const ArmModel& arm, const RobotState& r) {
  return forward_kinematics(arm, r.base_pose, r.base_height, r.base_roll, r.base_pitch, r.q_arm);
}

/// Points along the distal arm used for the self-collision check
/// (elbow, wrist, end-effector).
std::array<Vec3, 3> arm_collision_points(const ArmModel& arm, const RobotState& r);

}  // namespace pushrl
