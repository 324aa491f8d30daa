#include "pushrl/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "pushrl/io.hpp"

namespace pushrl {

std::vector<ConstraintSpec> ConstraintConfig::build_table() const {
  auto spec = [this](ConstraintId id, int dim, const Row& row, bool active) {
    ConstraintSpec s;
    s.id = id;
    s.dimension = dim;
    s.p_max_initial = row.p_initial;
    s.p_max_final = row.p_final;
    s.curriculum_end_iteration = row.curriculum ? curriculum_end_iteration : 0;
    s.normalization_scale = row.scale;
    s.active = active;
    return s;
  };
  return {
      spec(ConstraintId::kBaseCmd, 6, base_cmd, true),
      spec(ConstraintId::kArmCmd, 5, arm_cmd, true),
      spec(ConstraintId::kArmActionRate, 5, arm_action_rate, true),
      spec(ConstraintId::kArmJointPos, 5, arm_joint_pos, true),
      spec(ConstraintId::kArmJointVel, 5, arm_joint_vel, true),
      spec(ConstraintId::kArmTorque, 5, arm_torque, true),
      spec(ConstraintId::kLegTorque, 12, leg_torque, false),
      spec(ConstraintId::kCollision, 3, collision, true),
      spec(ConstraintId::kBalance, 1, balance, balance_enabled),
  };
}

ConstraintLimits ConstraintConfig::build_limits(const EnvConfig& env) const {
  ConstraintLimits lim;
  lim.base_lower = env.base_cmd_lower;
  lim.base_upper = env.base_cmd_upper;
  lim.qd_limit = qd_limit;
  lim.theta_lim = theta_lim_deg * kPi / 180.0;
  lim.balance_vel_threshold = balance_vel_threshold;
  return lim;
}

RunConfig default_config() {
  RunConfig cfg;
  // Desk-scale run length is 2000 iterations; schedule knobs keep the same
  // fraction of the run as their full-scale counterparts (1500 and 12000 of
  // 20000 iterations).
  cfg.rewards.r2_downscale_iteration = 150;
  cfg.constraints.curriculum_end_iteration = 1200;
  return cfg;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ConfigError("config key '" + path + "': " + why);
}

void check_map(const YAML::Node& node, const std::string& path,
               const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(path, "expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double get_num(const YAML::Node& n, const std::string& path) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(path, "expected a number");
  }
}

template <typename T>
void read_scalar(const YAML::Node& node, const std::string& parent, const char* key, T& out) {
  const YAML::Node n = node[key];
  if (!n) return;
  const std::string path = parent + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    try {
      out = n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(path, "expected a boolean");
    }
  } else if constexpr (std::is_integral_v<T>) {
    const double v = get_num(n, path);
    out = static_cast<T>(v);
  } else {
    out = static_cast<T>(get_num(n, path));
  }
}

template <int N>
void read_fixed_vec(const YAML::Node& node, const std::string& parent, const char* key,
                    Eigen::Matrix<double, N, 1>& out) {
  const YAML::Node n = node[key];
  if (!n) return;
  const std::string path = parent + "." + key;
  if (!n.IsSequence() || n.size() != N)
    fail(path, "expected a sequence of " + std::to_string(N) + " numbers");
  for (int i = 0; i < N; ++i) out[i] = get_num(n[i], path);
}

void read_int_list(const YAML::Node& node, const std::string& parent, const char* key,
                   std::vector<int>& out) {
  const YAML::Node n = node[key];
  if (!n) return;
  const std::string path = parent + "." + key;
  if (!n.IsSequence() || n.size() == 0) fail(path, "expected a non-empty sequence of integers");
  out.clear();
  for (const auto& item : n) out.push_back(static_cast<int>(get_num(item, path)));
}

void read_row(const YAML::Node& node, const std::string& parent, const char* key,
              ConstraintConfig::Row& row) {
  const YAML::Node n = node[key];
  if (!n) return;
  const std::string path = parent + "." + key;
  check_map(n, path, {"p_initial", "p_final", "scale", "curriculum"});
  read_scalar(n, path, "p_initial", row.p_initial);
  read_scalar(n, path, "p_final", row.p_final);
  read_scalar(n, path, "scale", row.scale);
  read_scalar(n, path, "curriculum", row.curriculum);
}

void parse_world(const YAML::Node& n, WorldConfig& w) {
  check_map(n, "world",
            {"dt", "contact_stiffness", "contact_force_cap", "base_time_constant",
             "arm_time_constant", "arm_rate_limit", "gravity", "push_speed_gain",
             "push_speed_cap", "tilt_gain", "tilt_restore_rate", "friction_vel_smoothing"});
  read_scalar(n, "world", "dt", w.dt);
  read_scalar(n, "world", "contact_stiffness", w.contact_stiffness);
  read_scalar(n, "world", "contact_force_cap", w.contact_force_cap);
  read_scalar(n, "world", "base_time_constant", w.base_time_constant);
  read_scalar(n, "world", "arm_time_constant", w.arm_time_constant);
  read_scalar(n, "world", "arm_rate_limit", w.arm_rate_limit);
  read_scalar(n, "world", "gravity", w.gravity);
  read_scalar(n, "world", "push_speed_gain", w.push_speed_gain);
  read_scalar(n, "world", "push_speed_cap", w.push_speed_cap);
  read_scalar(n, "world", "tilt_gain", w.tilt_gain);
  read_scalar(n, "world", "tilt_restore_rate", w.tilt_restore_rate);
  read_scalar(n, "world", "friction_vel_smoothing", w.friction_vel_smoothing);
  if (w.dt <= 0.0) fail("world.dt", "must be positive");
  if (w.contact_stiffness <= 0.0) fail("world.contact_stiffness", "must be positive");
  if (w.contact_force_cap <= 0.0) fail("world.contact_force_cap", "must be positive");
}

void parse_env(const YAML::Node& n, EnvConfig& e) {
  check_map(n, "env",
            {"episode_step_limit", "spawn_radius_min", "spawn_radius_max", "goal_radius",
             "success_dist", "success_yaw_deg", "action_scale_base", "action_scale_arm",
             "base_cmd_lower", "base_cmd_upper", "default_height", "surface_reach_target"});
  read_scalar(n, "env", "episode_step_limit", e.episode_step_limit);
  read_scalar(n, "env", "spawn_radius_min", e.spawn_radius_min);
  read_scalar(n, "env", "spawn_radius_max", e.spawn_radius_max);
  read_scalar(n, "env", "goal_radius", e.goal_radius);
  read_scalar(n, "env", "success_dist", e.success_dist);
  double yaw_deg = e.success_yaw * 180.0 / kPi;
  read_scalar(n, "env", "success_yaw_deg", yaw_deg);
  e.success_yaw = yaw_deg * kPi / 180.0;
  read_fixed_vec<6>(n, "env", "action_scale_base", e.action_scale_base);
  read_scalar(n, "env", "action_scale_arm", e.action_scale_arm);
  read_fixed_vec<6>(n, "env", "base_cmd_lower", e.base_cmd_lower);
  read_fixed_vec<6>(n, "env", "base_cmd_upper", e.base_cmd_upper);
  read_scalar(n, "env", "default_height", e.default_height);
  read_scalar(n, "env", "surface_reach_target", e.surface_reach_target);
  if (e.episode_step_limit <= 0) fail("env.episode_step_limit", "must be positive");
  if (e.spawn_radius_min > e.spawn_radius_max) fail("env.spawn_radius_min", "min exceeds max");
}

void parse_dr(const YAML::Node& n, DomainRandomization& d) {
  check_map(n, "domain_randomization",
            {"mass_min", "mass_max", "dims_xy_min", "dims_xy_max", "dims_z_min", "dims_z_max",
             "mu_ground_min", "mu_ground_max", "mu_contact", "com_xy_frac", "com_z_frac_low",
             "com_z_frac_high", "cylinder_prob", "base_mass_delta", "base_nominal_mass",
             "arm_reset_range", "push_interval_min", "push_interval_max", "push_speed_min",
             "push_speed_max", "enabled"});
  const std::string p = "domain_randomization";
  read_scalar(n, p, "mass_min", d.mass_min);
  read_scalar(n, p, "mass_max", d.mass_max);
  read_scalar(n, p, "dims_xy_min", d.dims_xy_min);
  read_scalar(n, p, "dims_xy_max", d.dims_xy_max);
  read_scalar(n, p, "dims_z_min", d.dims_z_min);
  read_scalar(n, p, "dims_z_max", d.dims_z_max);
  read_scalar(n, p, "mu_ground_min", d.mu_ground_min);
  read_scalar(n, p, "mu_ground_max", d.mu_ground_max);
  read_scalar(n, p, "mu_contact", d.mu_contact);
  read_scalar(n, p, "com_xy_frac", d.com_xy_frac);
  read_scalar(n, p, "com_z_frac_low", d.com_z_frac_low);
  read_scalar(n, p, "com_z_frac_high", d.com_z_frac_high);
  read_scalar(n, p, "cylinder_prob", d.cylinder_prob);
  read_scalar(n, p, "base_mass_delta", d.base_mass_delta);
  read_scalar(n, p, "base_nominal_mass", d.base_nominal_mass);
  read_scalar(n, p, "arm_reset_range", d.arm_reset_range);
  read_scalar(n, p, "push_interval_min", d.push_interval_min);
  read_scalar(n, p, "push_interval_max", d.push_interval_max);
  read_scalar(n, p, "push_speed_min", d.push_speed_min);
  read_scalar(n, p, "push_speed_max", d.push_speed_max);
  read_scalar(n, p, "enabled", d.enabled);
}

void parse_rewards(const YAML::Node& n, RewardConfig& r) {
  check_map(n, "rewards",
            {"w1", "w2", "w3", "w4", "sigma1_sq", "sigma2_sq", "sigma3_sq", "sigma4b_sq",
             "sigma4a_sq", "success_task_reward", "r2_downscale_factor",
             "r2_downscale_iteration"});
  read_scalar(n, "rewards", "w1", r.w1);
  read_scalar(n, "rewards", "w2", r.w2);
  read_scalar(n, "rewards", "w3", r.w3);
  read_scalar(n, "rewards", "w4", r.w4);
  read_scalar(n, "rewards", "sigma1_sq", r.sigma1_sq);
  read_scalar(n, "rewards", "sigma2_sq", r.sigma2_sq);
  read_scalar(n, "rewards", "sigma3_sq", r.sigma3_sq);
  read_scalar(n, "rewards", "sigma4b_sq", r.sigma4b_sq);
  read_scalar(n, "rewards", "sigma4a_sq", r.sigma4a_sq);
  read_scalar(n, "rewards", "success_task_reward", r.success_task_reward);
  read_scalar(n, "rewards", "r2_downscale_factor", r.r2_downscale_factor);
  read_scalar(n, "rewards", "r2_downscale_iteration", r.r2_downscale_iteration);
  if (r.sigma1_sq <= 0 || r.sigma2_sq <= 0 || r.sigma3_sq <= 0 || r.sigma4b_sq <= 0 ||
      r.sigma4a_sq <= 0)
    fail("rewards", "temperature parameters must be positive");
}

void parse_constraints(const YAML::Node& n, ConstraintConfig& c) {
  check_map(n, "constraints",
            {"curriculum_end_iteration", "qd_limit", "theta_lim_deg", "balance_vel_threshold",
             "balance_enabled", "base_cmd", "arm_cmd", "arm_action_rate", "arm_joint_pos",
             "arm_joint_vel", "arm_torque", "leg_torque", "collision", "balance"});
  const std::string p = "constraints";
  read_scalar(n, p, "curriculum_end_iteration", c.curriculum_end_iteration);
  read_scalar(n, p, "qd_limit", c.qd_limit);
  read_scalar(n, p, "theta_lim_deg", c.theta_lim_deg);
  read_scalar(n, p, "balance_vel_threshold", c.balance_vel_threshold);
  read_scalar(n, p, "balance_enabled", c.balance_enabled);
  read_row(n, p, "base_cmd", c.base_cmd);
  read_row(n, p, "arm_cmd", c.arm_cmd);
  read_row(n, p, "arm_action_rate", c.arm_action_rate);
  read_row(n, p, "arm_joint_pos", c.arm_joint_pos);
  read_row(n, p, "arm_joint_vel", c.arm_joint_vel);
  read_row(n, p, "arm_torque", c.arm_torque);
  read_row(n, p, "leg_torque", c.leg_torque);
  read_row(n, p, "collision", c.collision);
  read_row(n, p, "balance", c.balance);
}

void parse_ppo(const YAML::Node& n, PpoConfig& p) {
  check_map(n, "ppo",
            {"gamma", "lambda", "clip_eps", "epochs", "minibatches", "learning_rate", "lr_final",
             "entropy_coef", "value_coef", "max_grad_norm", "horizon", "num_envs", "iterations",
             "actor_hidden", "critic_hidden", "init_log_std", "checkpoint_every"});
  read_scalar(n, "ppo", "gamma", p.gamma);
  read_scalar(n, "ppo", "lambda", p.lambda);
  read_scalar(n, "ppo", "clip_eps", p.clip_eps);
  read_scalar(n, "ppo", "epochs", p.epochs);
  read_scalar(n, "ppo", "minibatches", p.minibatches);
  read_scalar(n, "ppo", "learning_rate", p.learning_rate);
  read_scalar(n, "ppo", "lr_final", p.lr_final);
  read_scalar(n, "ppo", "entropy_coef", p.entropy_coef);
  read_scalar(n, "ppo", "value_coef", p.value_coef);
  read_scalar(n, "ppo", "max_grad_norm", p.max_grad_norm);
  read_scalar(n, "ppo", "horizon", p.horizon);
  read_scalar(n, "ppo", "num_envs", p.num_envs);
  read_scalar(n, "ppo", "iterations", p.iterations);
  read_int_list(n, "ppo", "actor_hidden", p.actor_hidden);
  read_int_list(n, "ppo", "critic_hidden", p.critic_hidden);
  read_scalar(n, "ppo", "init_log_std", p.init_log_std);
  read_scalar(n, "ppo", "checkpoint_every", p.checkpoint_every);
  if (p.gamma <= 0.0 || p.gamma > 1.0) fail("ppo.gamma", "must be in (0, 1]");
  if (p.lambda <= 0.0 || p.lambda > 1.0) fail("ppo.lambda", "must be in (0, 1]");
  if (p.horizon <= 0 || p.num_envs <= 0) fail("ppo.horizon", "horizon/num_envs must be positive");
}

void parse_eval(const YAML::Node& n, EvalSettings& e) {
  check_map(n, "eval",
            {"episodes", "deterministic_policy", "noise", "trajectory_dump_count",
             "footprint_buckets", "footprint_success_target", "footprint_attempt_cap",
             "footprint_height", "footprint_mass", "footprint_friction"});
  read_scalar(n, "eval", "episodes", e.episodes);
  read_scalar(n, "eval", "deterministic_policy", e.deterministic_policy);
  read_scalar(n, "eval", "noise", e.noise);
  read_scalar(n, "eval", "trajectory_dump_count", e.trajectory_dump_count);
  read_scalar(n, "eval", "footprint_buckets", e.footprint_buckets);
  read_scalar(n, "eval", "footprint_success_target", e.footprint_success_target);
  read_scalar(n, "eval", "footprint_attempt_cap", e.footprint_attempt_cap);
  read_scalar(n, "eval", "footprint_height", e.footprint_height);
  read_scalar(n, "eval", "footprint_mass", e.footprint_mass);
  read_scalar(n, "eval", "footprint_friction", e.footprint_friction);
  if (e.episodes < 1) fail("eval.episodes", "must be at least 1");
}

}  // namespace

RunConfig parse_config_text(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  check_map(root, "",
            {"seed", "world", "env", "domain_randomization", "rewards", "constraints", "ppo",
             "eval"});
  if (root["seed"]) cfg.seed = root["seed"].as<std::uint64_t>();
  if (root["world"]) parse_world(root["world"], cfg.world);
  if (root["env"]) parse_env(root["env"], cfg.env);
  if (root["domain_randomization"]) parse_dr(root["domain_randomization"], cfg.dr);
  if (root["rewards"]) parse_rewards(root["rewards"], cfg.rewards);
  if (root["constraints"]) parse_constraints(root["constraints"], cfg.constraints);
  if (root["ppo"]) parse_ppo(root["ppo"], cfg.ppo);
  if (root["eval"]) parse_eval(root["eval"], cfg.eval);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

void emit_kv(std::ostream& os, int indent, const char* key, const std::string& value) {
  for (int i = 0; i < indent; ++i) os << ' ';
  os << key << ": " << value << "\n";
}

void emit_kv(std::ostream& os, int indent, const char* key, double value) {
  emit_kv(os, indent, key, format_double(value));
}

void emit_kv(std::ostream& os, int indent, const char* key, bool value) {
  emit_kv(os, indent, key, std::string(value ? "true" : "false"));
}

void emit_kv(std::ostream& os, int indent, const char* key, int value) {
  emit_kv(os, indent, key, std::to_string(value));
}

template <typename Derived>
std::string seq(const Eigen::MatrixBase<Derived>& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + "]";
}

std::string seq(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

void emit_row(std::ostream& os, const char* key, const ConstraintConfig::Row& r) {
  os << "  " << key << ": {p_initial: " << format_double(r.p_initial)
     << ", p_final: " << format_double(r.p_final) << ", scale: " << format_double(r.scale)
     << ", curriculum: " << (r.curriculum ? "true" : "false") << "}\n";
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "seed: " << c.seed << "\n";

  os << "world:\n";
  emit_kv(os, 2, "dt", c.world.dt);
  emit_kv(os, 2, "contact_stiffness", c.world.contact_stiffness);
  emit_kv(os, 2, "contact_force_cap", c.world.contact_force_cap);
  emit_kv(os, 2, "base_time_constant", c.world.base_time_constant);
  emit_kv(os, 2, "arm_time_constant", c.world.arm_time_constant);
  emit_kv(os, 2, "arm_rate_limit", c.world.arm_rate_limit);
  emit_kv(os, 2, "gravity", c.world.gravity);
  emit_kv(os, 2, "push_speed_gain", c.world.push_speed_gain);
  emit_kv(os, 2, "push_speed_cap", c.world.push_speed_cap);
  emit_kv(os, 2, "tilt_gain", c.world.tilt_gain);
  emit_kv(os, 2, "tilt_restore_rate", c.world.tilt_restore_rate);
  emit_kv(os, 2, "friction_vel_smoothing", c.world.friction_vel_smoothing);

  os << "env:\n";
  emit_kv(os, 2, "episode_step_limit", c.env.episode_step_limit);
  emit_kv(os, 2, "spawn_radius_min", c.env.spawn_radius_min);
  emit_kv(os, 2, "spawn_radius_max", c.env.spawn_radius_max);
  emit_kv(os, 2, "goal_radius", c.env.goal_radius);
  emit_kv(os, 2, "success_dist", c.env.success_dist);
  emit_kv(os, 2, "success_yaw_deg", c.env.success_yaw * 180.0 / kPi);
  emit_kv(os, 2, "action_scale_base", seq(c.env.action_scale_base));
  emit_kv(os, 2, "action_scale_arm", c.env.action_scale_arm);
  emit_kv(os, 2, "base_cmd_lower", seq(c.env.base_cmd_lower));
  emit_kv(os, 2, "base_cmd_upper", seq(c.env.base_cmd_upper));
  emit_kv(os, 2, "default_height", c.env.default_height);
  emit_kv(os, 2, "surface_reach_target", c.env.surface_reach_target);

  os << "domain_randomization:\n";
  emit_kv(os, 2, "mass_min", c.dr.mass_min);
  emit_kv(os, 2, "mass_max", c.dr.mass_max);
  emit_kv(os, 2, "dims_xy_min", c.dr.dims_xy_min);
  emit_kv(os, 2, "dims_xy_max", c.dr.dims_xy_max);
  emit_kv(os, 2, "dims_z_min", c.dr.dims_z_min);
  emit_kv(os, 2, "dims_z_max", c.dr.dims_z_max);
  emit_kv(os, 2, "mu_ground_min", c.dr.mu_ground_min);
  emit_kv(os, 2, "mu_ground_max", c.dr.mu_ground_max);
  emit_kv(os, 2, "mu_contact", c.dr.mu_contact);
  emit_kv(os, 2, "com_xy_frac", c.dr.com_xy_frac);
  emit_kv(os, 2, "com_z_frac_low", c.dr.com_z_frac_low);
  emit_kv(os, 2, "com_z_frac_high", c.dr.com_z_frac_high);
  emit_kv(os, 2, "cylinder_prob", c.dr.cylinder_prob);
  emit_kv(os, 2, "base_mass_delta", c.dr.base_mass_delta);
  emit_kv(os, 2, "base_nominal_mass", c.dr.base_nominal_mass);
  emit_kv(os, 2, "arm_reset_range", c.dr.arm_reset_range);
  emit_kv(os, 2, "push_interval_min", c.dr.push_interval_min);
  emit_kv(os, 2, "push_interval_max", c.dr.push_interval_max);
  emit_kv(os, 2, "push_speed_min", c.dr.push_speed_min);
  emit_kv(os, 2, "push_speed_max", c.dr.push_speed_max);
  emit_kv(os, 2, "enabled", c.dr.enabled);

  os << "rewards:\n";
  emit_kv(os, 2, "w1", c.rewards.w1);
  emit_kv(os, 2, "w2", c.rewards.w2);
  emit_kv(os, 2, "w3", c.rewards.w3);
  emit_kv(os, 2, "w4", c.rewards.w4);
  emit_kv(os, 2, "sigma1_sq", c.rewards.sigma1_sq);
  emit_kv(os, 2, "sigma2_sq", c.rewards.sigma2_sq);
  emit_kv(os, 2, "sigma3_sq", c.rewards.sigma3_sq);
  emit_kv(os, 2, "sigma4b_sq", c.rewards.sigma4b_sq);
  emit_kv(os, 2, "sigma4a_sq", c.rewards.sigma4a_sq);
  emit_kv(os, 2, "success_task_reward", c.rewards.success_task_reward);
  emit_kv(os, 2, "r2_downscale_factor", c.rewards.r2_downscale_factor);
  emit_kv(os, 2, "r2_downscale_iteration", c.rewards.r2_downscale_iteration);

  os << "constraints:\n";
  emit_kv(os, 2, "curriculum_end_iteration", c.constraints.curriculum_end_iteration);
  emit_kv(os, 2, "qd_limit", c.constraints.qd_limit);
  emit_kv(os, 2, "theta_lim_deg", c.constraints.theta_lim_deg);
  emit_kv(os, 2, "balance_vel_threshold", c.constraints.balance_vel_threshold);
  emit_kv(os, 2, "balance_enabled", c.constraints.balance_enabled);
  emit_row(os, "base_cmd", c.constraints.base_cmd);
  emit_row(os, "arm_cmd", c.constraints.arm_cmd);
  emit_row(os, "arm_action_rate", c.constraints.arm_action_rate);
  emit_row(os, "arm_joint_pos", c.constraints.arm_joint_pos);
  emit_row(os, "arm_joint_vel", c.constraints.arm_joint_vel);
  emit_row(os, "arm_torque", c.constraints.arm_torque);
  emit_row(os, "leg_torque", c.constraints.leg_torque);
  emit_row(os, "collision", c.constraints.collision);
  emit_row(os, "balance", c.constraints.balance);

  os << "ppo:\n";
  emit_kv(os, 2, "gamma", c.ppo.gamma);
  emit_kv(os, 2, "lambda", c.ppo.lambda);
  emit_kv(os, 2, "clip_eps", c.ppo.clip_eps);
  emit_kv(os, 2, "epochs", c.ppo.epochs);
  emit_kv(os, 2, "minibatches", c.ppo.minibatches);
  emit_kv(os, 2, "learning_rate", c.ppo.learning_rate);
  emit_kv(os, 2, "lr_final", c.ppo.lr_final);
  emit_kv(os, 2, "entropy_coef", c.ppo.entropy_coef);
  emit_kv(os, 2, "value_coef", c.ppo.value_coef);
  emit_kv(os, 2, "max_grad_norm", c.ppo.max_grad_norm);
  emit_kv(os, 2, "horizon", c.ppo.horizon);
  emit_kv(os, 2, "num_envs", c.ppo.num_envs);
  emit_kv(os, 2, "iterations", c.ppo.iterations);
  emit_kv(os, 2, "actor_hidden", seq(c.ppo.actor_hidden));
  emit_kv(os, 2, "critic_hidden", seq(c.ppo.critic_hidden));
  emit_kv(os, 2, "init_log_std", c.ppo.init_log_std);
  emit_kv(os, 2, "checkpoint_every", c.ppo.checkpoint_every);

  os << "eval:\n";
  emit_kv(os, 2, "episodes", c.eval.episodes);
  emit_kv(os, 2, "deterministic_policy", c.eval.deterministic_policy);
  emit_kv(os, 2, "noise", c.eval.noise);
  emit_kv(os, 2, "trajectory_dump_count", c.eval.trajectory_dump_count);
  emit_kv(os, 2, "footprint_buckets", c.eval.footprint_buckets);
  emit_kv(os, 2, "footprint_success_target", c.eval.footprint_success_target);
  emit_kv(os, 2, "footprint_attempt_cap", c.eval.footprint_attempt_cap);
  emit_kv(os, 2, "footprint_height", c.eval.footprint_height);
  emit_kv(os, 2, "footprint_mass", c.eval.footprint_mass);
  emit_kv(os, 2, "footprint_friction", c.eval.footprint_friction);
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a(serialize_config(cfg)); }

}  // namespace pushrl
