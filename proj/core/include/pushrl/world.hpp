#pragma once

#include <optional>

#include "pushrl/contact.hpp"
#include "pushrl/object.hpp"
#include "pushrl/robot.hpp"

namespace pushrl {

/// Fixed-step integrator parameters. Values are stable at dt = 0.02 s.
struct WorldConfig {
  double dt{0.02};                   // s, control and physics step
  double contact_stiffness{2000.0};  // N/m
  double contact_force_cap{200.0};   // N
  double base_time_constant{0.3};    // s, first-order command tracking
  double arm_time_constant{0.1};     // s
  double arm_rate_limit{2.0};        // rad/s
  double gravity{9.81};              // m/s^2
  double push_speed_gain{1.0};       // m/s per unit of limit-surface excess
  double push_speed_cap{1.5};        // m/s
  double tilt_gain{1.0};             // rad/s per unit normalized excess moment
  double tilt_restore_rate{1.0};     // rad/s
  double friction_vel_smoothing{0.01};  // m/s, Coulomb regularization
};

struct PlanarTwist {
  Vec2 v{0, 0};
  double omega{0.0};
};

/// Horizontal contact wrench about the CoM ground projection.
struct ContactWrench {
  Vec2 force{0, 0};      // N
  double torque{0.0};    // N m, about +z
  double normal_force{0.0};
  Vec2 push_dir{1, 0};   // unit horizontal direction of the normal force
};

/// Penalty force at the contact plus regularized Coulomb friction from the
/// end-effector sliding along the surface.
ContactWrench contact_wrench(const ContactInfo& contact, const ObjectParams& params,
                             const ObjectState& state, const WorldConfig& cfg,
                             const Vec2& ee_vel_xy = Vec2::Zero());

/// Quasi-static object twist from the ellipsoidal limit-surface model.
/// Returns zero while the normalized wrench is inside the unit surface.
PlanarTwist limit_surface_twist(const ContactInfo& contact, const ObjectParams& params,
                                const ObjectState& state, const WorldConfig& cfg,
                                const Vec2& ee_vel_xy = Vec2::Zero());

/// Inclination angle at which the CoM passes over the support edge.
inline double theta_topple(double support_distance, double com_height) {
  return std::atan2(support_distance, com_height);
}

/// Support-edge tipping integrator. Tilting initiates when the contact
/// moment exceeds the gravity restoring moment and the contact sits high
/// enough that tipping is reached before sliding (h_c > b / mu).
TiltState tilt_update(const ContactInfo& contact, const ObjectParams& params,
                      const ObjectState& state, const WorldConfig& cfg, bool* toppled,
                      const Vec2& ee_vel_xy = Vec2::Zero());

struct StepResult {
  RobotState robot;
  ObjectState object;
  ContactInfo contact;
  bool fault{false};  // non-finite state detected
};

/// Advances the world exactly one dt. Base commands are
/// (vx, vy, wz, roll, pitch, height) tracked with first-order lag; arm
/// joints track q_cmd under a rate limit; the object follows the
/// quasi-static pushing and tipping models. Pure function of its inputs.
StepResult step_world(const RobotState& robot, const ObjectState& obj, const ObjectParams& params,
                      const WorldConfig& cfg, const ArmModel& arm, const BaseCmd& base_cmd,
                      const ArmVec& q_cmd, const std::optional<Vec2>& base_vel_impulse = std::nullopt);

}  // namespace pushrl
