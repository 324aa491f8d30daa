#pragma once

#include <array>
#include <string>
#include <vector>

#include "pushrl/env.hpp"

namespace pushrl {

/// Constraint families, in table order. LegTorque belongs to the legged
/// platform and is carried in the table for completeness; the abstracted
/// base has no legs, so it is never evaluated.
enum class ConstraintId : int {
  kBaseCmd = 0,
  kArmCmd,
  kArmActionRate,
  kArmJointPos,
  kArmJointVel,
  kArmTorque,
  kLegTorque,
  kCollision,
  kBalance,
  kCount
};

inline constexpr int kConstraintCount = static_cast<int>(ConstraintId::kCount);

const char* constraint_name(ConstraintId id);

struct ConstraintSpec {
  ConstraintId id{ConstraintId::kBaseCmd};
  int dimension{1};
  double p_max_initial{0.0};
  double p_max_final{0.0};
  int curriculum_end_iteration{0};  // 0: no curriculum, fixed at p_max_final
  double normalization_scale{0.2};  // raw value at which termination saturates
  bool active{true};
};

/// Termination probability cap at a given learning iteration (linear ramp
/// over [0, curriculum_end], constant afterwards).
double p_max_at(const ConstraintSpec& spec, int iteration);

/// The nine-row table with the published p_max endpoints and curriculum
/// window. The collision row uses the reduced three-pair set.
std::vector<ConstraintSpec> default_constraint_table(int curriculum_end_iteration = 12000);

struct ConstraintLimits {
  BaseCmd base_lower{(BaseCmd() << -0.7, -0.7, -0.8, -0.3, -0.3, 0.35).finished()};
  BaseCmd base_upper{(BaseCmd() << 0.7, 0.7, 0.8, 0.3, 0.3, 0.65).finished()};
  double qd_limit{2.0};                      // rad/s
  double theta_lim{10.0 * kPi / 180.0};      // object inclination limit
  double balance_vel_threshold{0.05};        // m/s of base motion
  // Reduced collision geometry: base box, leg cylinders, arm clearance.
  double base_half_length{0.40};
  double base_half_width{0.25};
  double base_box_half_height{0.15};
  double leg_offset_x{0.35};
  double leg_offset_y{0.22};
  double leg_radius{0.10};
  double arm_clearance{0.05};
};

/// Raw per-step constraint values; positive components are violations.
struct ConstraintReport {
  BaseCmd base_cmd{BaseCmd::Zero()};
  ArmVec arm_cmd{ArmVec::Zero()};
  ArmVec arm_action_rate{ArmVec::Zero()};
  ArmVec joint_pos{ArmVec::Zero()};
  ArmVec joint_vel{ArmVec::Zero()};
  ArmVec joint_torque{ArmVec::Zero()};
  Vec3 collision{Vec3::Zero()};  // object-base, object-legs, arm-base (binary)
  double balance{0.0};

  double max_component(ConstraintId id) const;
  bool violated(ConstraintId id) const { return max_component(id) > 0.0; }
};

ConstraintReport constraint_values(const TransitionRecord& rec, const EpisodeSpec& spec,
                                   const ConstraintLimits& limits, const ArmModel& arm, double dt);

/// Constraints-as-terminations probability: max over constraint components
/// of p_max(iteration) * clamp(max(0, c) / s, 0, 1).
double cat_termination(const ConstraintReport& report, const std::vector<ConstraintSpec>& specs,
                       int iteration);

/// Per-episode violated-time bookkeeping (fraction of steps with any
/// positive component, per family).
struct ViolationAccumulator {
  std::array<long, kConstraintCount> violated_steps{};
  long total_steps{0};

  void add(const ConstraintReport& report);
  /// Percentage of steps violated within this accumulation run.
  std::array<double, kConstraintCount> percentages() const;
};

/// Mean of per-episode violation percentages.
std::array<double, kConstraintCount> violation_time_average(
    const std::vector<ViolationAccumulator>& episodes);

}  // namespace pushrl
