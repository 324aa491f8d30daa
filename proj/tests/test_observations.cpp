#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>

#include "pushrl/env.hpp"

using namespace pushrl;

static_assert(ActorLayout::kEeObjectPos == 0);
static_assert(ActorLayout::kObjectRot == 3);
static_assert(ActorLayout::kArmJointPos == 12);
static_assert(ActorLayout::kBaseLinVel == 17);
static_assert(ActorLayout::kBaseAngVel == 20);
static_assert(ActorLayout::kArmJointVel == 23);
static_assert(ActorLayout::kGravity == 28);
static_assert(ActorLayout::kObjectGoalPos == 31);
static_assert(ActorLayout::kGoalRot == 34);
static_assert(ActorLayout::kPrevAction == 43);
static_assert(ActorLayout::kDim == 54);
static_assert(CriticLayout::kContactState == 54);
static_assert(CriticLayout::kComPos == 55);
static_assert(CriticLayout::kMass == 58);
static_assert(CriticLayout::kDims == 59);
static_assert(CriticLayout::kInertia == 62);
static_assert(CriticLayout::kObjectLinVel == 65);
static_assert(CriticLayout::kObjectAngVel == 68);
static_assert(CriticLayout::kShapeOneHot == 71);
static_assert(CriticLayout::kDim == 73);

namespace {

struct Fixture {
  ArmModel arm;
  ObjectParams params;
  ObjectState object;
  RobotState robot;
  ContactInfo contact;
  Pose2 goal{1.0, -0.5, 0.4};
  Action prev_action{Action::Zero()};

  Fixture() {
    params.dims = Vec3(0.5, 0.4, 1.0);
    params.mass = 6.0;
    robot.base_pose = {0.0, 0.0, 0.0};
    robot.base_height = 0.5;
    robot.q_arm = arm.q_default;
    robot.ee_pos_world = forward_kinematics(arm, robot);
  }

  ObsInputs inputs() const {
    return ObsInputs{robot, object, params, contact, goal, arm, prev_action};
  }
};

}  // namespace

TEST_CASE("actor obs: identity-frame slice semantics") {
  Fixture f;
  // Object centroid at the base origin (0, 0, 0.5), identity orientations.
  Rng rng(1);
  const ActorObs obs = build_actor_obs(f.inputs(), rng, false);

  const Vec3 p_oe = obs.segment<3>(ActorLayout::kEeObjectPos);
  CHECK(p_oe.isApprox(f.robot.ee_pos_world - Vec3(0, 0, 0.5), 1e-12));

  Mat3 r_o;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r_o(i, j) = obs[ActorLayout::kObjectRot + 3 * i + j];
  CHECK(r_o.isApprox(Mat3::Identity(), 1e-12));

  CHECK(obs.segment<5>(ActorLayout::kArmJointPos).norm() == 0.0);  // at default configuration
  CHECK(obs.segment<3>(ActorLayout::kGravity).isApprox(Vec3(0, 0, -1), 1e-12));
  CHECK(obs.segment<11>(ActorLayout::kPrevAction) == f.prev_action);
}

TEST_CASE("actor obs: p_og frame correctness against the inverse base transform") {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    Fixture f;
    f.robot.base_pose = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi)};
    f.robot.base_roll = rng.uniform(-0.3, 0.3);
    f.robot.base_pitch = rng.uniform(-0.3, 0.3);
    f.robot.base_height = rng.uniform(0.35, 0.65);
    f.robot.ee_pos_world = forward_kinematics(f.arm, f.robot);
    f.object.planar_pose = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-kPi, kPi)};
    f.goal = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi)};

    Rng noise_rng(3);
    const ActorObs obs = build_actor_obs(f.inputs(), noise_rng, false);

    const Mat3 r_wb = Eigen::AngleAxisd(f.robot.base_pose.yaw, Vec3::UnitZ()).toRotationMatrix() *
                      Eigen::AngleAxisd(f.robot.base_pitch, Vec3::UnitY()).toRotationMatrix() *
                      Eigen::AngleAxisd(f.robot.base_roll, Vec3::UnitX()).toRotationMatrix();
    const Vec3 p_o(f.object.planar_pose.x, f.object.planar_pose.y, 0.5 * f.params.dims.z());
    const Vec3 p_g(f.goal.x, f.goal.y, 0.5 * f.params.dims.z());
    const Vec3 oracle = r_wb.transpose() * (p_g - p_o);
    CHECK((obs.segment<3>(ActorLayout::kObjectGoalPos) - oracle).norm() < 1e-9);
  }
}

TEST_CASE("actor obs: rotation blocks orthonormal and gravity unit before noise") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    Fixture f;
    f.robot.base_pose.yaw = rng.uniform(-kPi, kPi);
    f.robot.base_roll = rng.uniform(-0.3, 0.3);
    f.robot.base_pitch = rng.uniform(-0.3, 0.3);
    f.object.planar_pose.yaw = rng.uniform(-kPi, kPi);
    f.object.tilt.angle = rng.uniform(0.0, 0.25);
    f.object.tilt.axis_yaw = rng.uniform(-kPi, kPi);
    f.robot.ee_pos_world = forward_kinematics(f.arm, f.robot);

    Rng noise_rng(5);
    const ActorObs obs = build_actor_obs(f.inputs(), noise_rng, false);
    for (int block : {ActorLayout::kObjectRot, ActorLayout::kGoalRot}) {
      Mat3 r;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = obs[block + 3 * i + j];
      CHECK((r * r.transpose() - Mat3::Identity()).norm() < 1e-12);
    }
    CHECK(obs.segment<3>(ActorLayout::kGravity).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("actor obs: additive noise within the published bounds, zero violations") {
  Fixture f;
  Rng clean_rng(0);
  const ActorObs clean = build_actor_obs(f.inputs(), clean_rng, false);
  const ActorObs bounds = actor_noise_bounds();
  Rng noise_rng(123);
  for (int i = 0; i < 100000; ++i) {
    const ActorObs noisy = build_actor_obs(f.inputs(), noise_rng, true);
    const ActorObs diff = noisy - clean;
    for (int k = 0; k < kActorObsDim; ++k) {
      if (std::abs(diff[k]) > bounds[k]) {
        REQUIRE_MESSAGE(false, "noise bound violated at index ", k);
      }
    }
  }
  // Previous actions are observed noise-free.
  CHECK(bounds.segment<11>(ActorLayout::kPrevAction).norm() == 0.0);
}

TEST_CASE("actor obs: noiseless builds are deterministic") {
  Fixture f;
  Rng r1(10), r2(20);
  const ActorObs a = build_actor_obs(f.inputs(), r1, false);
  const ActorObs b = build_actor_obs(f.inputs(), r2, false);
  CHECK(a == b);
}

TEST_CASE("critic obs: privileged block values") {
  Fixture f;
  f.params.com_offset = Vec3(0.05, -0.02, 0.1);
  f.contact.in_contact = true;
  f.object.lin_vel = Vec2(0.2, -0.1);
  f.object.yaw_rate = 0.3;
  const CriticObs obs = build_critic_obs(f.inputs());

  Rng rng(0);
  const ActorObs actor_part = build_actor_obs(f.inputs(), rng, false);
  CHECK(obs.head<kActorObsDim>() == actor_part);

  CHECK(obs[CriticLayout::kContactState] == 1.0);
  CHECK(obs[CriticLayout::kMass] == 6.0);
  CHECK(obs.segment<3>(CriticLayout::kDims).isApprox(f.params.dims, 1e-15));
  CHECK(obs.segment<3>(CriticLayout::kInertia).isApprox(f.params.principal_inertia(), 1e-15));
  // Identity base: relative object velocity appears unrotated.
  CHECK(obs.segment<3>(CriticLayout::kObjectLinVel).isApprox(Vec3(0.2, -0.1, 0), 1e-12));
  CHECK(obs.segment<3>(CriticLayout::kObjectAngVel).isApprox(Vec3(0, 0, 0.3), 1e-12));
  // CoM position w.r.t. the base origin.
  const Vec3 com_expected = Vec3(0.05, -0.02, 0.6) - Vec3(0, 0, 0.5);
  CHECK(obs.segment<3>(CriticLayout::kComPos).isApprox(com_expected, 1e-12));

  CHECK(obs[CriticLayout::kShapeOneHot] == 1.0);
  CHECK(obs[CriticLayout::kShapeOneHot + 1] == 0.0);
  f.params.shape = Shape::kCylinder;
  const CriticObs cyl = build_critic_obs(f.inputs());
  CHECK(cyl[CriticLayout::kShapeOneHot] == 0.0);
  CHECK(cyl[CriticLayout::kShapeOneHot + 1] == 1.0);
  CHECK(cyl[CriticLayout::kShapeOneHot] + cyl[CriticLayout::kShapeOneHot + 1] == 1.0);
}
