#include "pushrl/env.hpp"

#include <cmath>
#include <stdexcept>

namespace pushrl {

DomainDraw randomize_domain(Rng& rng, const DomainRandomization& dr, const ArmModel& arm) {
  DomainDraw draw;
  ObjectParams& obj = draw.object;

  // Fixed draw order keeps episodes reproducible under a given seed.
  const bool cylinder = rng.bernoulli(dr.cylinder_prob);
  obj.shape = cylinder ? Shape::kCylinder : Shape::kCuboid;
  const double dx = rng.uniform(dr.dims_xy_min, dr.dims_xy_max);
  const double dy = rng.uniform(dr.dims_xy_min, dr.dims_xy_max);
  const double dz = rng.uniform(dr.dims_z_min, dr.dims_z_max);
  obj.dims = cylinder ? Vec3(dx, dx, dz) : Vec3(dx, dy, dz);
  obj.mass = rng.uniform(dr.mass_min, dr.mass_max);
  obj.mu_ground = rng.uniform(dr.mu_ground_min, dr.mu_ground_max);
  obj.mu_contact = dr.mu_contact;
  obj.com_offset.x() = rng.uniform(-dr.com_xy_frac, dr.com_xy_frac) * obj.dims.x();
  obj.com_offset.y() = rng.uniform(-dr.com_xy_frac, dr.com_xy_frac) * obj.dims.y();
  obj.com_offset.z() = rng.uniform(dr.com_z_frac_low, dr.com_z_frac_high) * 0.5 * obj.dims.z();
  const double mass_delta = rng.uniform(-dr.base_mass_delta, dr.base_mass_delta);
  draw.base_time_constant_scale = (dr.base_nominal_mass + mass_delta) / dr.base_nominal_mass;
  for (int i = 0; i < kArmJoints; ++i) {
    const double q = arm.q_default[i] + rng.uniform(-dr.arm_reset_range, dr.arm_reset_range);
    draw.arm_q_init[i] = clamp(q, arm.q_lower[i], arm.q_upper[i]);
  }

  if (!dr.enabled || dr.fixed_shape) obj.shape = dr.fixed_shape.value_or(Shape::kCuboid);
  if (!dr.enabled) {
    obj.dims = Vec3(0.5, 0.5, 0.6);
    obj.mass = 5.0;
    obj.mu_ground = 0.8;
    obj.com_offset.setZero();
    draw.base_time_constant_scale = 1.0;
  }
  if (dr.fixed_dims) {
    obj.dims = *dr.fixed_dims;
    if (obj.shape == Shape::kCylinder) obj.dims.y() = obj.dims.x();
  }
  if (dr.fixed_mass) obj.mass = *dr.fixed_mass;
  if (dr.fixed_mu_ground) obj.mu_ground = *dr.fixed_mu_ground;
  if (dr.fixed_com_centered) obj.com_offset.setZero();
  return draw;
}

AppliedCommands apply_action(const Action& action, const EnvConfig& cfg, const ArmModel& arm) {
  AppliedCommands out;
  out.base_delta = cfg.action_scale_base.cwiseProduct(action.head<kBaseCmdDim>());
  out.arm_delta = cfg.action_scale_arm * action.tail<kArmJoints>();

  BaseCmd defaults = BaseCmd::Zero();
  defaults[5] = cfg.default_height;
  out.base_abs = defaults + out.base_delta;
  out.arm_abs = arm.q_default + out.arm_delta;

  out.base_sim = out.base_abs.cwiseMax(cfg.base_cmd_lower).cwiseMin(cfg.base_cmd_upper);
  out.arm_sim = out.arm_abs.cwiseMax(arm.q_lower).cwiseMin(arm.q_upper);
  return out;
}

bool check_success(const ObjectState& object, const Pose2& goal, const EnvConfig& cfg) {
  const double dx = object.planar_pose.x - goal.x;
  const double dy = object.planar_pose.y - goal.y;
  const double dist = std::hypot(dx, dy);
  const double yaw_err = std::abs(wrap_angle(object.planar_pose.yaw - goal.yaw));
  return dist <= cfg.success_dist && yaw_err <= cfg.success_yaw;
}

TerminationKind check_termination(const EnvState& state, int episode_step_limit) {
  if (state.object.toppled) return TerminationKind::kToppled;
  if (state.step_count >= episode_step_limit) return TerminationKind::kTimeout;
  return TerminationKind::kRunning;
}

ResetResult reset_sample(Rng rng, const DomainRandomization& dr, const EnvConfig& cfg,
                         const WorldConfig& world, const ArmModel& arm) {
  ResetResult out;
  EpisodeSpec& spec = out.spec;
  EnvState& st = out.state;

  DomainDraw draw = randomize_domain(rng, dr, arm);
  spec.object_params = draw.object;
  spec.base_time_constant_scale = draw.base_time_constant_scale;
  spec.arm_q_init = draw.arm_q_init;
  spec.episode_step_limit = cfg.episode_step_limit;

  spec.object_spawn = Pose2{0.0, 0.0, rng.uniform(-kPi, kPi)};

  const double r2_lo = cfg.spawn_radius_min * cfg.spawn_radius_min;
  const double r2_hi = cfg.spawn_radius_max * cfg.spawn_radius_max;
  const double r_robot = std::sqrt(rng.uniform(r2_lo, r2_hi));
  const double a_robot = rng.uniform(-kPi, kPi);
  spec.robot_spawn = Pose2{r_robot * std::cos(a_robot), r_robot * std::sin(a_robot), rng.uniform(-kPi, kPi)};

  const double r_goal = cfg.goal_radius * std::sqrt(rng.uniform());
  const double a_goal = rng.uniform(-kPi, kPi);
  spec.goal_pose = Pose2{r_goal * std::cos(a_goal), r_goal * std::sin(a_goal), rng.uniform(-kPi, kPi)};

  if (cfg.surface_reach_target) {
    spec.reach_target_obj = surface_sample(spec.object_params, rng);
  } else {
    spec.reach_target_obj = Vec3(0.0, 0.0, 0.5 * spec.object_params.dims.z());
  }

  st.object = ObjectState{};
  st.object.planar_pose = spec.object_spawn;

  st.robot = RobotState{};
  st.robot.base_pose = spec.robot_spawn;
  st.robot.base_height = cfg.default_height;
  st.robot.q_arm = spec.arm_q_init;
  st.robot.ee_pos_world = forward_kinematics(arm, st.robot);

  st.contact = resolve_contact(st.robot, spec.object_params, st.object);
  st.next_push_time = rng.uniform(dr.push_interval_min, dr.push_interval_max);
  st.prev_reach_dist =
      (object_point_to_world(spec.object_params, st.object, spec.reach_target_obj) - st.robot.ee_pos_world)
          .norm();
  st.rng = rng;
  return out;
}

void PushEnv::reset(Rng rng) {
  ResetResult r = reset_sample(rng, dr_, cfg_, world_, arm_);
  spec_ = r.spec;
  state_ = r.state;
}

Vec3 PushEnv::reach_target_world() const {
  return object_point_to_world(spec_.object_params, state_.object, spec_.reach_target_obj);
}

ObsInputs PushEnv::obs_inputs() const {
  return ObsInputs{state_.robot,  state_.object, spec_.object_params, state_.contact,
                   spec_.goal_pose, arm_,        state_.prev_action};
}

ActorObs PushEnv::actor_obs(bool noise_on) {
  return build_actor_obs(obs_inputs(), state_.rng, noise_on);
}

CriticObs PushEnv::critic_obs() const { return build_critic_obs(obs_inputs()); }

TransitionRecord PushEnv::step(const Action& action) {
  if (terminated()) throw std::logic_error("PushEnv::step called on a terminated environment");

  TransitionRecord rec;
  rec.step_index = state_.step_count;
  rec.prev_base_cmd_delta = state_.prev_base_cmd_delta;
  rec.prev_arm_cmd_delta = state_.prev_arm_cmd_delta;

  const AppliedCommands cmd = apply_action(action, cfg_, arm_);
  rec.base_cmd_abs = cmd.base_abs;
  rec.q_cmd_abs = cmd.arm_abs;
  rec.base_cmd_delta = cmd.base_delta;
  rec.arm_cmd_delta = cmd.arm_delta;

  std::optional<Vec2> impulse;
  const double t_next = (state_.step_count + 1) * world_.dt;
  if (t_next >= state_.next_push_time) {
    const double mag = state_.rng.uniform(dr_.push_speed_min, dr_.push_speed_max);
    const double ang = state_.rng.uniform(-kPi, kPi);
    impulse = Vec2(mag * std::cos(ang), mag * std::sin(ang));
    state_.next_push_time += state_.rng.uniform(dr_.push_interval_min, dr_.push_interval_max);
  }

  WorldConfig world = world_;
  world.base_time_constant *= spec_.base_time_constant_scale;
  const StepResult sr = step_world(state_.robot, state_.object, spec_.object_params, world, arm_,
                                   cmd.base_sim, cmd.arm_sim, impulse);
  state_.robot = sr.robot;
  state_.object = sr.object;
  state_.contact = sr.contact;
  state_.step_count += 1;
  rec.fault = sr.fault;

  const double reach_dist = (reach_target_world() - state_.robot.ee_pos_world).norm();
  if (!state_.success_latched && check_success(state_.object, spec_.goal_pose, cfg_)) {
    state_.success_latched = true;
    state_.steps_to_success = state_.step_count;
    state_.frozen_reach_dist = state_.prev_reach_dist;
  }
  state_.termination = check_termination(state_, spec_.episode_step_limit);

  rec.obj_after = state_.object;
  rec.robot_after = state_.robot;
  rec.contact = state_.contact;
  rec.reach_target_world = reach_target_world();
  rec.reach_dist = reach_dist;
  rec.frozen_reach_dist = state_.frozen_reach_dist;
  rec.success_latched = state_.success_latched;
  rec.object_vel = state_.object.lin_vel;
  rec.object_to_goal = Vec2(spec_.goal_pose.x - state_.object.planar_pose.x,
                            spec_.goal_pose.y - state_.object.planar_pose.y);
  rec.base_speed = state_.robot.base_lin_vel.norm();
  rec.termination = state_.termination;

  state_.prev_action = action;
  state_.prev_base_cmd_delta = cmd.base_delta;
  state_.prev_arm_cmd_delta = cmd.arm_delta;
  state_.prev_reach_dist = reach_dist;
  return rec;
}

}  // namespace pushrl
