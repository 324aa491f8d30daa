#include "pushrl/rewards.hpp"

#include <cmath>

namespace pushrl {

RewardTerms reward_terms(const TransitionRecord& rec, const EpisodeSpec& spec,
                         const RewardConfig& cfg, bool success_latched) {
  RewardTerms t;

  if (success_latched) {
    t.r1 = cfg.success_task_reward;
    const double frozen = rec.frozen_reach_dist >= 0.0 ? rec.frozen_reach_dist : rec.reach_dist;
    t.r2 = std::exp(-frozen / cfg.sigma1_sq);
    t.r3 = 0.0;
  } else {
    const auto k_obj = obb_keypoints(spec.object_params, rec.obj_after);
    const auto k_goal = goal_keypoints(spec.object_params, spec.goal_pose);
    t.r1 = std::exp(-keypoint_distance(k_obj, k_goal) / cfg.sigma3_sq);
    t.r2 = std::exp(-rec.reach_dist / cfg.sigma1_sq);

    const double speed = rec.object_vel.norm();
    const double to_goal = rec.object_to_goal.norm();
    double alignment = -1.0;  // at rest the term takes its minimum
    if (speed >= 1e-6 && to_goal >= 1e-9) {
      alignment = rec.object_vel.dot(rec.object_to_goal) / (speed * to_goal);
    }
    t.r3 = std::exp((alignment - 1.0) / cfg.sigma2_sq);
  }

  const double base_rate = (rec.base_cmd_delta - rec.prev_base_cmd_delta).lpNorm<1>();
  const double arm_rate = (rec.arm_cmd_delta - rec.prev_arm_cmd_delta).lpNorm<1>();
  t.r4 = std::exp(-base_rate / cfg.sigma4b_sq) + std::exp(-arm_rate / cfg.sigma4a_sq);
  return t;
}

double total_reward(const RewardTerms& t, const RewardConfig& cfg, int iteration) {
  return cfg.w1 * t.r1 + effective_w2(cfg, iteration) * t.r2 + cfg.w3 * t.r3 + cfg.w4 * t.r4;
}

}  // namespace pushrl
