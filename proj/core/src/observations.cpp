#include "pushrl/observations.hpp"

namespace pushrl {

ActorObs actor_noise_bounds() {
  ActorObs n = ActorObs::Zero();
  n.segment<3>(ActorLayout::kEeObjectPos).setConstant(0.02);
  n.segment<9>(ActorLayout::kObjectRot).setConstant(0.01);
  n.segment<5>(ActorLayout::kArmJointPos).setConstant(0.01);
  n.segment<3>(ActorLayout::kBaseLinVel).setConstant(0.01);
  n.segment<3>(ActorLayout::kBaseAngVel).setConstant(0.20);
  n.segment<5>(ActorLayout::kArmJointVel).setConstant(0.50);
  n.segment<3>(ActorLayout::kGravity).setConstant(0.05);
  n.segment<3>(ActorLayout::kObjectGoalPos).setConstant(0.02);
  n.segment<9>(ActorLayout::kGoalRot).setConstant(0.01);
  return n;
}

namespace {

void put_rotation(ActorObs& obs, int offset, const Mat3& r) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) obs[offset + 3 * i + j] = r(i, j);
}

}  // namespace

ActorObs build_actor_obs(const ObsInputs& in, Rng& rng, bool noise_on) {
  ActorObs obs = ActorObs::Zero();
  const Mat3 r_wb = base_rotation(in.robot);
  const Mat3 r_bw = r_wb.transpose();
  const ObjectFrame obj = object_frame(in.params, in.object);

  obs.segment<3>(ActorLayout::kEeObjectPos) = r_bw * (in.robot.ee_pos_world - obj.centroid);
  put_rotation(obs, ActorLayout::kObjectRot, r_bw * obj.rotation);
  obs.segment<5>(ActorLayout::kArmJointPos) = in.robot.q_arm - in.arm.q_default;
  obs.segment<3>(ActorLayout::kBaseLinVel) =
      Vec3(in.robot.base_lin_vel.x(), in.robot.base_lin_vel.y(), 0.0);
  obs.segment<3>(ActorLayout::kBaseAngVel) = Vec3(0.0, 0.0, in.robot.base_yaw_rate);
  obs.segment<5>(ActorLayout::kArmJointVel) = in.robot.qd_arm;
  obs.segment<3>(ActorLayout::kGravity) = r_bw * Vec3(0.0, 0.0, -1.0);

  const Vec3 goal_pos(in.goal.x, in.goal.y, 0.5 * in.params.dims.z());
  obs.segment<3>(ActorLayout::kObjectGoalPos) = r_bw * (goal_pos - obj.centroid);
  put_rotation(obs, ActorLayout::kGoalRot, obj.rotation.transpose() * rot_z(in.goal.yaw));
  obs.segment<11>(ActorLayout::kPrevAction) = in.prev_action;

  if (noise_on) {
    const ActorObs bounds = actor_noise_bounds();
    for (int i = 0; i < kActorObsDim; ++i) {
      if (bounds[i] > 0.0) obs[i] += rng.uniform(-bounds[i], bounds[i]);
    }
  }
  return obs;
}

CriticObs build_critic_obs(const ObsInputs& in) {
  CriticObs obs = CriticObs::Zero();
  Rng unused(0);
  obs.head<kActorObsDim>() = build_actor_obs(in, unused, false);

  const Mat3 r_bw = base_rotation(in.robot).transpose();
  const ObjectFrame obj = object_frame(in.params, in.object);
  const Vec3 com_world = obj.to_world(in.params.com_offset);

  obs[CriticLayout::kContactState] = in.contact.in_contact ? 1.0 : 0.0;
  obs.segment<3>(CriticLayout::kComPos) = r_bw * (com_world - base_origin(in.robot));
  obs[CriticLayout::kMass] = in.params.mass;
  obs.segment<3>(CriticLayout::kDims) = in.params.dims;
  obs.segment<3>(CriticLayout::kInertia) = in.params.principal_inertia();

  const Vec2 v_base_world = rotate2(in.robot.base_pose.yaw, in.robot.base_lin_vel);
  const Vec3 v_rel(in.object.lin_vel.x() - v_base_world.x(), in.object.lin_vel.y() - v_base_world.y(), 0.0);
  obs.segment<3>(CriticLayout::kObjectLinVel) = r_bw * v_rel;
  obs.segment<3>(CriticLayout::kObjectAngVel) =
      r_bw * Vec3(0.0, 0.0, in.object.yaw_rate - in.robot.base_yaw_rate);
  obs[CriticLayout::kShapeOneHot] = in.params.shape == Shape::kCuboid ? 1.0 : 0.0;
  obs[CriticLayout::kShapeOneHot + 1] = in.params.shape == Shape::kCylinder ? 1.0 : 0.0;
  return obs;
}

}  // namespace pushrl
