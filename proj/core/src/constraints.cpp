#include "pushrl/constraints.hpp"

#include <algorithm>
#include <cmath>

namespace pushrl {

const char* constraint_name(ConstraintId id) {
  switch (id) {
    case ConstraintId::kBaseCmd: return "base_cmd";
    case ConstraintId::kArmCmd: return "arm_cmd";
    case ConstraintId::kArmActionRate: return "arm_action_rate";
    case ConstraintId::kArmJointPos: return "arm_joint_pos";
    case ConstraintId::kArmJointVel: return "arm_joint_vel";
    case ConstraintId::kArmTorque: return "arm_torque";
    case ConstraintId::kLegTorque: return "leg_torque";
    case ConstraintId::kCollision: return "collision";
    case ConstraintId::kBalance: return "object_balance";
    default: return "unknown";
  }
}

double p_max_at(const ConstraintSpec& spec, int iteration) {
  if (spec.curriculum_end_iteration <= 0) return spec.p_max_final;
  const double f = clamp(static_cast<double>(iteration) / spec.curriculum_end_iteration, 0.0, 1.0);
  return spec.p_max_initial + f * (spec.p_max_final - spec.p_max_initial);
}

std::vector<ConstraintSpec> default_constraint_table(int curriculum_end_iteration) {
  const int end = curriculum_end_iteration;
  return {
      {ConstraintId::kBaseCmd, 6, 0.01, 0.2, end, 0.2, true},
      {ConstraintId::kArmCmd, 5, 0.05, 0.9, end, 0.2, true},
      {ConstraintId::kArmActionRate, 5, 0.0, 0.05, end, 0.2, true},
      {ConstraintId::kArmJointPos, 5, 0.05, 0.9, end, 0.2, true},
      {ConstraintId::kArmJointVel, 5, 0.05, 0.9, end, 0.2, true},
      {ConstraintId::kArmTorque, 5, 0.0, 0.015, end, 5.0, true},
      // No legs in the abstracted base; row kept for the table contract.
      {ConstraintId::kLegTorque, 12, 0.0, 0.01, end, 5.0, false},
      {ConstraintId::kCollision, 3, 1.0, 1.0, 0, 1.0, true},
      {ConstraintId::kBalance, 1, 0.25, 0.25, 0, 0.1, true},
  };
}

namespace {

bool obb_overlap_2d(const Vec2& c1, double yaw1, const Vec2& h1, const Vec2& c2, double yaw2,
                    const Vec2& h2) {
  const Vec2 axes[4] = {rotate2(yaw1, Vec2(1, 0)), rotate2(yaw1, Vec2(0, 1)),
                        rotate2(yaw2, Vec2(1, 0)), rotate2(yaw2, Vec2(0, 1))};
  const Vec2 d = c2 - c1;
  for (const Vec2& a : axes) {
    const double e1 = h1.x() * std::abs(a.dot(axes[0])) + h1.y() * std::abs(a.dot(axes[1]));
    const double e2 = h2.x() * std::abs(a.dot(axes[2])) + h2.y() * std::abs(a.dot(axes[3]));
    if (std::abs(a.dot(d)) > e1 + e2) return false;
  }
  return true;
}

bool circle_vs_obb_2d(const Vec2& center, double radius, const Vec2& box_center, double box_yaw,
                      const Vec2& half) {
  const Vec2 local = rotate2(-box_yaw, center - box_center);
  const Vec2 closest(clamp(local.x(), -half.x(), half.x()), clamp(local.y(), -half.y(), half.y()));
  return (local - closest).squaredNorm() < radius * radius;
}

Vec3 collision_flags(const TransitionRecord& rec, const EpisodeSpec& spec,
                     const ConstraintLimits& lim, const ArmModel& arm) {
  Vec3 flags = Vec3::Zero();
  const RobotState& r = rec.robot_after;
  const ObjectState& o = rec.obj_after;
  const ObjectParams& obj = spec.object_params;

  const Vec2 base_c(r.base_pose.x, r.base_pose.y);
  const Vec2 base_h(lim.base_half_length, lim.base_half_width);
  const Vec2 obj_c(o.planar_pose.x, o.planar_pose.y);

  if (obj.shape == Shape::kCuboid) {
    const Vec2 obj_h(0.5 * obj.dims.x(), 0.5 * obj.dims.y());
    if (obb_overlap_2d(base_c, r.base_pose.yaw, base_h, obj_c, o.planar_pose.yaw, obj_h))
      flags[0] = 1.0;
  } else if (circle_vs_obb_2d(obj_c, obj.radius(), base_c, r.base_pose.yaw, base_h)) {
    flags[0] = 1.0;
  }

  for (const double sx : {-1.0, 1.0}) {
    for (const double sy : {-1.0, 1.0}) {
      const Vec2 leg = base_c + rotate2(r.base_pose.yaw,
                                        Vec2(sx * lim.leg_offset_x, sy * lim.leg_offset_y));
      bool hit = false;
      if (obj.shape == Shape::kCuboid) {
        hit = circle_vs_obb_2d(leg, lim.leg_radius, obj_c, o.planar_pose.yaw,
                               Vec2(0.5 * obj.dims.x(), 0.5 * obj.dims.y()));
      } else {
        hit = (leg - obj_c).norm() < lim.leg_radius + obj.radius();
      }
      if (hit) {
        flags[1] = 1.0;
        break;
      }
    }
    if (flags[1] > 0.0) break;
  }

  const Vec2 box_half(lim.base_half_length + lim.arm_clearance,
                      lim.base_half_width + lim.arm_clearance);
  const double z_half = lim.base_box_half_height + lim.arm_clearance;
  for (const Vec3& p : arm_collision_points(arm, r)) {
    const Vec2 local = rotate2(-r.base_pose.yaw, Vec2(p.x(), p.y()) - base_c);
    if (std::abs(local.x()) <= box_half.x() && std::abs(local.y()) <= box_half.y() &&
        std::abs(p.z() - r.base_height) <= z_half) {
      flags[2] = 1.0;
      break;
    }
  }
  return flags;
}

}  // namespace

ConstraintReport constraint_values(const TransitionRecord& rec, const EpisodeSpec& spec,
                                   const ConstraintLimits& limits, const ArmModel& arm, double dt) {
  ConstraintReport rep;
  rep.base_cmd = (rec.base_cmd_abs - limits.base_upper).cwiseMax(limits.base_lower - rec.base_cmd_abs);
  rep.arm_cmd = (rec.q_cmd_abs - arm.q_upper).cwiseMax(arm.q_lower - rec.q_cmd_abs);
  rep.arm_action_rate =
      ((rec.arm_cmd_delta - rec.prev_arm_cmd_delta) / dt).cwiseAbs() - ArmVec::Constant(limits.qd_limit);
  rep.joint_pos =
      (rec.robot_after.q_arm - arm.q_upper).cwiseMax(arm.q_lower - rec.robot_after.q_arm);
  rep.joint_vel = rec.robot_after.qd_arm.cwiseAbs() - ArmVec::Constant(limits.qd_limit);
  rep.joint_torque = rec.robot_after.tau_arm.cwiseAbs() - ArmVec::Constant(arm.torque_limit);
  rep.collision = collision_flags(rec, spec, limits, arm);
  rep.balance = rec.base_speed > limits.balance_vel_threshold
                    ? std::abs(rec.obj_after.tilt.angle) - limits.theta_lim
                    : 0.0;
  return rep;
}

double ConstraintReport::max_component(ConstraintId id) const {
  switch (id) {
    case ConstraintId::kBaseCmd: return base_cmd.maxCoeff();
    case ConstraintId::kArmCmd: return arm_cmd.maxCoeff();
    case ConstraintId::kArmActionRate: return arm_action_rate.maxCoeff();
    case ConstraintId::kArmJointPos: return joint_pos.maxCoeff();
    case ConstraintId::kArmJointVel: return joint_vel.maxCoeff();
    case ConstraintId::kArmTorque: return joint_torque.maxCoeff();
    case ConstraintId::kLegTorque: return 0.0;  // not simulated
    case ConstraintId::kCollision: return collision.maxCoeff();
    case ConstraintId::kBalance: return balance;
    default: return 0.0;
  }
}

double cat_termination(const ConstraintReport& report, const std::vector<ConstraintSpec>& specs,
                       int iteration) {
  double delta = 0.0;
  for (const ConstraintSpec& s : specs) {
    if (!s.active) continue;
    const double c = std::max(0.0, report.max_component(s.id));
    if (c <= 0.0) continue;
    const double p = p_max_at(s, iteration) * clamp(c / s.normalization_scale, 0.0, 1.0);
    delta = std::max(delta, p);
  }
  return delta;
}

void ViolationAccumulator::add(const ConstraintReport& report) {
  for (int i = 0; i < kConstraintCount; ++i) {
    if (report.violated(static_cast<ConstraintId>(i))) ++violated_steps[i];
  }
  ++total_steps;
}

std::array<double, kConstraintCount> ViolationAccumulator::percentages() const {
  std::array<double, kConstraintCount> out{};
  if (total_steps == 0) return out;
  for (int i = 0; i < kConstraintCount; ++i)
    out[i] = 100.0 * static_cast<double>(violated_steps[i]) / static_cast<double>(total_steps);
  return out;
}

std::array<double, kConstraintCount> violation_time_average(
    const std::vector<ViolationAccumulator>& episodes) {
  std::array<double, kConstraintCount> out{};
  if (episodes.empty()) return out;
  for (const auto& ep : episodes) {
    const auto p = ep.percentages();
    for (int i = 0; i < kConstraintCount; ++i) out[i] += p[i];
  }
  for (auto& v : out) v /= static_cast<double>(episodes.size());
  return out;
}

}  // namespace pushrl
