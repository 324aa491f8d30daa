#pragma once

#include <stdexcept>
#include <string>

#include "pushrl/constraints.hpp"
#include "pushrl/env.hpp"
#include "pushrl/ppo.hpp"
#include "pushrl/rewards.hpp"

namespace pushrl {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalSettings {
  int episodes{512};
  bool deterministic_policy{true};  // mean actions
  bool noise{true};
  int trajectory_dump_count{0};
  int footprint_buckets{6};
  int footprint_success_target{200};
  int footprint_attempt_cap{4000};
  double footprint_height{0.6};
  double footprint_mass{5.0};
  double footprint_friction{0.8};
};

/// Per-family termination-probability rows (initial/final caps, saturation
/// scale) plus shared limits and the curriculum window.
struct ConstraintConfig {
  struct Row {
    double p_initial{0.0};
    double p_final{0.0};
    double scale{0.2};
    bool curriculum{true};
  };

  int curriculum_end_iteration{1200};
  double qd_limit{2.0};
  double theta_lim_deg{10.0};
  double balance_vel_threshold{0.05};
  bool balance_enabled{true};
  Row base_cmd{0.01, 0.2, 0.2, true};
  Row arm_cmd{0.05, 0.9, 0.2, true};
  Row arm_action_rate{0.0, 0.05, 0.2, true};
  Row arm_joint_pos{0.05, 0.9, 0.2, true};
  Row arm_joint_vel{0.05, 0.9, 0.2, true};
  Row arm_torque{0.0, 0.015, 5.0, true};
  Row leg_torque{0.0, 0.01, 5.0, true};  // carried, never evaluated
  Row collision{1.0, 1.0, 1.0, false};
  Row balance{0.25, 0.25, 0.1, false};

  std::vector<ConstraintSpec> build_table() const;
  ConstraintLimits build_limits(const EnvConfig& env) const;
};

struct RunConfig {
  std::uint64_t seed{0};
  WorldConfig world;
  EnvConfig env;
  DomainRandomization dr;
  RewardConfig rewards;
  ConstraintConfig constraints;
  PpoConfig ppo;
  EvalSettings eval;
};

/// Desk-scale defaults; matches the shipped configs/default.yaml.
RunConfig default_config();

/// Parses and validates; unknown or ill-typed keys raise ConfigError with
/// the offending dotted key path.
RunConfig parse_config_text(const std::string& yaml_text);
RunConfig load_config(const std::string& path);

/// Canonical YAML serialization (value-level round-trip with parse).
std::string serialize_config(const RunConfig& cfg);

std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace pushrl
