#pragma once

#include "pushrl/contact.hpp"
#include "pushrl/object.hpp"
#include "pushrl/rng.hpp"
#include "pushrl/robot.hpp"

namespace pushrl {

inline constexpr int kActionDim = 11;
inline constexpr int kActorObsDim = 54;
inline constexpr int kCriticObsDim = 73;

using Action = Eigen::Matrix<double, kActionDim, 1>;
using ActorObs = Eigen::Matrix<double, kActorObsDim, 1>;
using CriticObs = Eigen::Matrix<double, kCriticObsDim, 1>;

/// Named slices of the actor observation, in wire order.
struct ActorLayout {
  static constexpr int kEeObjectPos = 0;   // ^b p_oe, 3
  static constexpr int kObjectRot = 3;     // ^b R_o row-major, 9
  static constexpr int kArmJointPos = 12;  // q - q_default, 5
  static constexpr int kBaseLinVel = 17;   // 3
  static constexpr int kBaseAngVel = 20;   // 3
  static constexpr int kArmJointVel = 23;  // 5
  static constexpr int kGravity = 28;      // ^b g_z, 3
  static constexpr int kObjectGoalPos = 31;  // ^b p_og, 3
  static constexpr int kGoalRot = 34;      // ^o R_g row-major, 9
  static constexpr int kPrevAction = 43;   // 11
  static constexpr int kDim = 54;
};

/// Privileged block appended after the (noiseless) actor observation.
struct CriticLayout {
  static constexpr int kContactState = 54;  // 1
  static constexpr int kComPos = 55;        // ^b p_com, 3
  static constexpr int kMass = 58;          // 1
  static constexpr int kDims = 59;          // 3
  static constexpr int kInertia = 62;       // 3
  static constexpr int kObjectLinVel = 65;  // ^b v_o, 3
  static constexpr int kObjectAngVel = 68;  // ^b w_o, 3
  static constexpr int kShapeOneHot = 71;   // 2
  static constexpr int kDim = 73;
};

/// Additive uniform noise half-widths per actor observation entry.
ActorObs actor_noise_bounds();

struct ObsInputs {
  const RobotState& robot;
  const ObjectState& object;
  const ObjectParams& params;
  const ContactInfo& contact;
  Pose2 goal;
  const ArmModel& arm;
  const Action& prev_action;
};

ActorObs build_actor_obs(const ObsInputs& in, Rng& rng, bool noise_on);
CriticObs build_critic_obs(const ObsInputs& in);

}  // namespace pushrl
