#include "pushrl/world.hpp"

#include <cmath>

namespace pushrl {

namespace {

double torsion_radius(const ObjectParams& params) {
  if (params.shape == Shape::kCylinder) return (2.0 / 3.0) * params.radius();
  // Uniform-pressure approximation for a rectangular patch.
  return 0.4 * 0.5 * (params.dims.x() + params.dims.y());
}

Vec2 com_ground_projection(const ObjectParams& params, const ObjectState& state) {
  const ObjectFrame frame = object_frame(params, state);
  const Vec3 com = frame.to_world(params.com_offset);
  return {com.x(), com.y()};
}

bool all_finite(const RobotState& r, const ObjectState& o) {
  const bool robot_ok = std::isfinite(r.base_pose.x) && std::isfinite(r.base_pose.y) &&
                        std::isfinite(r.base_pose.yaw) && std::isfinite(r.base_height) &&
                        std::isfinite(r.base_roll) && std::isfinite(r.base_pitch) &&
                        r.base_lin_vel.allFinite() && std::isfinite(r.base_yaw_rate) &&
                        r.q_arm.allFinite() && r.qd_arm.allFinite() && r.ee_pos_world.allFinite();
  const bool obj_ok = std::isfinite(o.planar_pose.x) && std::isfinite(o.planar_pose.y) &&
                      std::isfinite(o.planar_pose.yaw) && std::isfinite(o.tilt.angle) &&
                      std::isfinite(o.tilt.axis_yaw) && o.lin_vel.allFinite() &&
                      std::isfinite(o.yaw_rate);
  return robot_ok && obj_ok;
}

}  // namespace

ContactWrench contact_wrench(const ContactInfo& contact, const ObjectParams& params,
                             const ObjectState& state, const WorldConfig& cfg, const Vec2& ee_vel_xy) {
  ContactWrench w;
  if (!contact.in_contact) return w;

  const double fn = std::min(cfg.contact_stiffness * contact.penetration, cfg.contact_force_cap);
  w.normal_force = fn;
  const Vec2 n_h(contact.inward_normal.x(), contact.inward_normal.y());
  const double n_h_len = n_h.norm();
  if (n_h_len < 1e-12) return w;
  w.push_dir = n_h / n_h_len;
  w.force = fn * n_h;

  // Regularized Coulomb friction from EE sliding along the face.
  const Vec2 com = com_ground_projection(params, state);
  const Vec2 cp(contact.contact_point.x(), contact.contact_point.y());
  const Vec2 r = cp - com;
  const Vec2 v_surface = state.lin_vel + state.yaw_rate * Vec2(-r.y(), r.x());
  const Vec2 v_rel = ee_vel_xy - v_surface;
  Vec2 v_tan = v_rel - v_rel.dot(w.push_dir) * w.push_dir;
  const double slip = v_tan.norm();
  if (slip > 1e-12) {
    const double ft = params.mu_contact * fn * n_h_len * slip / (slip + cfg.friction_vel_smoothing);
    w.force += ft * (v_tan / slip);
  }
  w.torque = cross2(r, w.force);
  return w;
}

PlanarTwist limit_surface_twist(const ContactInfo& contact, const ObjectParams& params,
                                const ObjectState& state, const WorldConfig& cfg, const Vec2& ee_vel_xy) {
  PlanarTwist twist;
  const ContactWrench w = contact_wrench(contact, params, state, cfg, ee_vel_xy);
  const double f_max = params.mu_ground * params.mass * cfg.gravity;
  if (f_max <= 0.0) return twist;
  const double m_max = torsion_radius(params) * f_max;

  const double norm = std::sqrt((w.force.x() * w.force.x() + w.force.y() * w.force.y()) / (f_max * f_max) +
                                (w.torque * w.torque) / (m_max * m_max));
  if (norm <= 1.0) return twist;

  // Motion along the limit-surface gradient at the wrench.
  Vec3 g(w.force.x() / (f_max * f_max), w.force.y() / (f_max * f_max), w.torque / (m_max * m_max));
  const double g_len = g.norm();
  if (g_len < 1e-15) return twist;
  g /= g_len;
  const double speed = std::min(cfg.push_speed_gain * (norm - 1.0), cfg.push_speed_cap);
  twist.v = speed * Vec2(g.x(), g.y());
  twist.omega = speed * g.z();
  return twist;
}

TiltState tilt_update(const ContactInfo& contact, const ObjectParams& params,
                      const ObjectState& state, const WorldConfig& cfg, bool* toppled,
                      const Vec2& ee_vel_xy) {
  TiltState tilt = state.tilt;
  if (toppled) *toppled = state.toppled;
  if (state.toppled) return tilt;

  const ContactWrench w = contact_wrench(contact, params, state, cfg, ee_vel_xy);
  const double f_h = w.force.norm();
  const bool tilting = tilt.angle > 1e-9;

  Vec2 fall;
  if (tilting) {
    fall = tilt_fall_direction(tilt.axis_yaw);
  } else if (f_h > 1e-9) {
    fall = w.force / f_h;
    if (params.shape == Shape::kCuboid) {
      // Boxes pivot about a bottom edge: snap the fall direction to the
      // object axis closest to the push.
      const double yaw = state.planar_pose.yaw;
      const Vec2 d_obj = rotate2(-yaw, fall);
      Vec2 axis_obj = std::abs(d_obj.x()) >= std::abs(d_obj.y())
                          ? Vec2(d_obj.x() >= 0 ? 1.0 : -1.0, 0.0)
                          : Vec2(0.0, d_obj.y() >= 0 ? 1.0 : -1.0);
      fall = rotate2(yaw, axis_obj);
    }
    tilt.axis_yaw = std::atan2(fall.x(), -fall.y());
  } else {
    fall = Vec2(1, 0);
  }

  const double yaw = state.planar_pose.yaw;
  const double r_e = support_half_extent(params, yaw, fall);
  const Vec2 com_xy = rotate2(yaw, Vec2(params.com_offset.x(), params.com_offset.y()));
  const double b = std::max(r_e - com_xy.dot(fall), 1e-6);
  const double h_com = std::max(params.com_height(), 1e-6);
  const double drive = contact.in_contact ? std::max(w.force.dot(fall), 0.0) : 0.0;
  const double h_c = contact.contact_height;

  const double weight = params.mass * cfg.gravity;
  const bool tip_first = h_c > b / params.mu_ground;
  const bool moment_exceeds = drive * h_c > weight * b;

  if (contact.in_contact && h_c > 0.0 && moment_exceeds && tip_first) {
    const double rate = cfg.tilt_gain * (drive * h_c - weight * b) / (weight * h_com);
    tilt.angle += rate * cfg.dt;
  } else {
    tilt.angle = std::max(0.0, tilt.angle - cfg.tilt_restore_rate * cfg.dt);
  }

  if (toppled && tilt.angle >= theta_topple(b, h_com)) *toppled = true;
  return tilt;
}

StepResult step_world(const RobotState& robot, const ObjectState& obj, const ObjectParams& params,
                      const WorldConfig& cfg, const ArmModel& arm, const BaseCmd& base_cmd,
                      const ArmVec& q_cmd, const std::optional<Vec2>& base_vel_impulse) {
  StepResult out;
  RobotState r = robot;
  const double dt = cfg.dt;
  const double alpha_b = 1.0 - std::exp(-dt / cfg.base_time_constant);

  r.base_lin_vel += alpha_b * (Vec2(base_cmd[0], base_cmd[1]) - r.base_lin_vel);
  r.base_yaw_rate += alpha_b * (base_cmd[2] - r.base_yaw_rate);
  if (base_vel_impulse) r.base_lin_vel += *base_vel_impulse;
  r.base_roll += alpha_b * (base_cmd[3] - r.base_roll);
  r.base_pitch += alpha_b * (base_cmd[4] - r.base_pitch);
  r.base_height += alpha_b * (base_cmd[5] - r.base_height);

  r.base_pose.yaw = wrap_angle(r.base_pose.yaw + r.base_yaw_rate * dt);
  const Vec2 v_world = rotate2(r.base_pose.yaw, r.base_lin_vel);
  r.base_pose.x += v_world.x() * dt;
  r.base_pose.y += v_world.y() * dt;

  const double alpha_a = 1.0 - std::exp(-dt / cfg.arm_time_constant);
  for (int i = 0; i < kArmJoints; ++i) {
    double qd = (q_cmd[i] - r.q_arm[i]) * alpha_a / dt;
    qd = clamp(qd, -cfg.arm_rate_limit, cfg.arm_rate_limit);
    r.q_arm[i] += qd * dt;
    r.qd_arm[i] = qd;
    r.tau_arm[i] = arm.impedance_kp * (q_cmd[i] - r.q_arm[i]) - arm.impedance_kd * qd;
  }

  const Vec3 ee_prev = robot.ee_pos_world;
  r.ee_pos_world = forward_kinematics(arm, r);
  const Vec2 ee_vel_xy((r.ee_pos_world.x() - ee_prev.x()) / dt, (r.ee_pos_world.y() - ee_prev.y()) / dt);

  ObjectState o = obj;
  ContactInfo contact = resolve_contact(r, params, obj);
  if (!obj.toppled) {
    const PlanarTwist twist = limit_surface_twist(contact, params, obj, cfg, ee_vel_xy);
    o.planar_pose.x += twist.v.x() * dt;
    o.planar_pose.y += twist.v.y() * dt;
    o.planar_pose.yaw = wrap_angle(o.planar_pose.yaw + twist.omega * dt);
    o.lin_vel = twist.v;
    o.yaw_rate = twist.omega;
    bool toppled = false;
    o.tilt = tilt_update(contact, params, obj, cfg, &toppled, ee_vel_xy);
    o.toppled = toppled;
  } else {
    o.lin_vel.setZero();
    o.yaw_rate = 0.0;
  }

  out.robot = r;
  out.object = o;
  out.contact = contact;
  out.fault = !all_finite(r, o);
  return out;
}

}  // namespace pushrl
