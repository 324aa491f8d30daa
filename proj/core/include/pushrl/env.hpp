#pragma once

#include <optional>

#include "pushrl/observations.hpp"
#include "pushrl/world.hpp"

namespace pushrl {

/// Per-episode randomization ranges. com fractions for x/y apply to the full
/// dimension, the z range to the half-height (keeps the CoM inside the body).
struct DomainRandomization {
  double mass_min{1.0}, mass_max{10.0};            // kg
  double dims_xy_min{0.25}, dims_xy_max{0.75};     // m
  double dims_z_min{0.4}, dims_z_max{1.0};         // m
  double mu_ground_min{0.4}, mu_ground_max{1.25};
  double mu_contact{0.8};
  double com_xy_frac{0.25};
  double com_z_frac_low{-0.6}, com_z_frac_high{0.25};
  double cylinder_prob{0.5};
  double base_mass_delta{5.0};       // kg
  double base_nominal_mass{30.0};    // kg
  double arm_reset_range{0.3};       // rad
  double push_interval_min{7.0}, push_interval_max{10.0};  // s
  double push_speed_min{0.3}, push_speed_max{0.6};         // m/s
  bool enabled{true};
  /// When set, these object properties are pinned instead of sampled
  /// (footprint sweeps and similar controlled evaluations).
  std::optional<Vec3> fixed_dims;
  std::optional<double> fixed_mass;
  std::optional<double> fixed_mu_ground;
  std::optional<Shape> fixed_shape;
  bool fixed_com_centered{false};
};

struct EnvConfig {
  int episode_step_limit{1000};
  double spawn_radius_min{1.2}, spawn_radius_max{2.5};  // m
  double goal_radius{2.0};                              // m
  double success_dist{0.10};                            // m
  double success_yaw{10.0 * kPi / 180.0};               // rad
  BaseCmd action_scale_base{(BaseCmd() << 0.7, 0.7, 0.8, 0.3, 0.3, 0.15).finished()};
  double action_scale_arm{0.5};
  BaseCmd base_cmd_lower{(BaseCmd() << -0.7, -0.7, -0.8, -0.3, -0.3, 0.35).finished()};
  BaseCmd base_cmd_upper{(BaseCmd() << 0.7, 0.7, 0.8, 0.3, 0.3, 0.65).finished()};
  double default_height{0.5};
  bool surface_reach_target{true};  // ablation: object centroid instead
};

struct DomainDraw {
  ObjectParams object;
  double base_time_constant_scale{1.0};
  ArmVec arm_q_init{ArmVec::Zero()};
};

/// Draws object properties and robot perturbations within the configured
/// ranges; consumes a fixed number of rng values per call.
DomainDraw randomize_domain(Rng& rng, const DomainRandomization& dr, const ArmModel& arm);

struct EpisodeSpec {
  ObjectParams object_params;
  Pose2 goal_pose;
  Vec3 reach_target_obj;  // bottom-anchored object frame, z in [0, dims.z]
  Pose2 robot_spawn;
  Pose2 object_spawn;
  int episode_step_limit{1000};
  double base_time_constant_scale{1.0};
  ArmVec arm_q_init{ArmVec::Zero()};
};

enum class TerminationKind { kRunning, kTimeout, kToppled };

struct EnvState {
  RobotState robot;
  ObjectState object;
  ContactInfo contact;
  int step_count{0};
  bool success_latched{false};
  int steps_to_success{-1};
  Action prev_action{Action::Zero()};
  BaseCmd prev_base_cmd_delta{BaseCmd::Zero()};
  ArmVec prev_arm_cmd_delta{ArmVec::Zero()};
  double prev_reach_dist{0.0};
  double frozen_reach_dist{-1.0};
  double next_push_time{0.0};  // s
  TerminationKind termination{TerminationKind::kRunning};
  Rng rng;
};

/// Everything the reward and constraint evaluators need about one step.
struct TransitionRecord {
  int step_index{0};
  ObjectState obj_after;
  RobotState robot_after;
  ContactInfo contact;
  BaseCmd base_cmd_abs{BaseCmd::Zero()};  // absolute, before clipping
  ArmVec q_cmd_abs{ArmVec::Zero()};
  BaseCmd base_cmd_delta{BaseCmd::Zero()};
  ArmVec arm_cmd_delta{ArmVec::Zero()};
  BaseCmd prev_base_cmd_delta{BaseCmd::Zero()};
  ArmVec prev_arm_cmd_delta{ArmVec::Zero()};
  Vec3 reach_target_world{0, 0, 0};
  double reach_dist{0.0};
  double frozen_reach_dist{-1.0};
  bool success_latched{false};
  Vec2 object_vel{0, 0};
  Vec2 object_to_goal{0, 0};
  double base_speed{0.0};
  TerminationKind termination{TerminationKind::kRunning};
  bool fault{false};
};

struct AppliedCommands {
  BaseCmd base_abs;   // defaults + scaled action, unclipped
  ArmVec arm_abs;
  BaseCmd base_sim;   // clipped to physical ranges
  ArmVec arm_sim;
  BaseCmd base_delta;  // scaled deviations
  ArmVec arm_delta;
};

AppliedCommands apply_action(const Action& action, const EnvConfig& cfg, const ArmModel& arm);

bool check_success(const ObjectState& object, const Pose2& goal, const EnvConfig& cfg);

TerminationKind check_termination(const EnvState& state, int episode_step_limit);

struct ResetResult {
  EpisodeSpec spec;
  EnvState state;
};

/// Spawns an episode: object at the origin with uniform yaw, robot base
/// area-uniform over the spawn annulus, goal area-uniform over the goal
/// disc, domain randomization applied, reach target drawn on the object
/// surface. The rng becomes the per-episode stream.
ResetResult reset_sample(Rng rng, const DomainRandomization& dr, const EnvConfig& cfg,
                         const WorldConfig& world, const ArmModel& arm);

/// One independent task instance. Stepping a terminated environment is a
/// contract violation; callers reset explicitly.
class PushEnv {
 public:
  PushEnv(EnvConfig cfg, WorldConfig world, ArmModel arm, DomainRandomization dr)
      : cfg_(cfg), world_(world), arm_(arm), dr_(dr) {}

  void reset(Rng rng);

  /// Advances one control step and returns the record for reward and
  /// constraint evaluation.
  TransitionRecord step(const Action& action);

  bool terminated() const { return state_.termination != TerminationKind::kRunning; }

  ActorObs actor_obs(bool noise_on);
  CriticObs critic_obs() const;

  const EpisodeSpec& spec() const { return spec_; }
  EpisodeSpec& mutable_spec() { return spec_; }
  const EnvState& state() const { return state_; }
  EnvState& mutable_state() { return state_; }
  const EnvConfig& env_config() const { return cfg_; }
  const WorldConfig& world_config() const { return world_; }
  const ArmModel& arm_model() const { return arm_; }

  /// World position of the episode reach target attached to the object.
  Vec3 reach_target_world() const;

 private:
  ObsInputs obs_inputs() const;

  EnvConfig cfg_;
  WorldConfig world_;
  ArmModel arm_;
  DomainRandomization dr_;
  EpisodeSpec spec_;
  EnvState state_;
};

}  // namespace pushrl
