#include "pushrl/robot.hpp"

namespace pushrl {

namespace {

struct Frame {
  Mat3 r;
  Vec3 p;

  void rotate(const Mat3& rot) { r = r * rot; }
  void translate(const Vec3& t) { p = p + r * t; }
};

Frame chain_to_wrist(const ArmModel& arm, const Pose2& base_pose, double base_height,
                     double base_roll, double base_pitch, const ArmVec& q, Vec3* elbow, Vec3* wrist) {
  Frame f;
  f.r = rot_z(base_pose.yaw) * rot_y(base_pitch) * rot_x(base_roll);
  f.p = Vec3(base_pose.x, base_pose.y, base_height);
  f.translate(arm.shoulder_offset);
  f.rotate(rot_z(q[0]));
  f.rotate(rot_y(q[1]));
  f.translate(Vec3(arm.link1, 0, 0));
  if (elbow) *elbow = f.p;
  f.rotate(rot_y(q[2]));
  f.translate(Vec3(arm.link2, 0, 0));
  f.rotate(rot_y(q[3]));
  f.translate(Vec3(arm.link3, 0, 0));
  if (wrist) *wrist = f.p;
  f.rotate(rot_z(q[4]));
  return f;
}

}  // namespace

Vec3 forward_kinematics(const ArmModel& arm, const Pose2& base_pose, double base_height,
                        double base_roll, double base_pitch, const ArmVec& q_arm) {
  Frame f = chain_to_wrist(arm, base_pose, base_height, base_roll, base_pitch, q_arm, nullptr, nullptr);
  f.translate(Vec3(arm.ee_offset, 0, 0));
  return f.p;
}

std::array<Vec3, 3> arm_collision_points(const ArmModel& arm, const RobotState& r) {
  Vec3 elbow, wrist;
  Frame f = chain_to_wrist(arm, r.base_pose, r.base_height, r.base_roll, r.base_pitch, r.q_arm, &elbow, &wrist);
  f.translate(Vec3(arm.ee_offset, 0, 0));
  return {elbow, wrist, f.p};
}

}  // namespace pushrl
