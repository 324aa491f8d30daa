#pragma once

#include "pushrl/env.hpp"

namespace pushrl {

struct RewardConfig {
  double w1{2.5};
  double w2{1.25};
  double w3{0.156};
  double w4{0.3};
  double sigma1_sq{0.16};  // EE-reach temperature, m
  double sigma2_sq{0.5};   // velocity-alignment temperature
  double sigma3_sq{1.44};  // keypoint-distance temperature, m
  double sigma4b_sq{0.5};  // base action-rate temperature
  double sigma4a_sq{0.5};  // arm action-rate temperature
  double success_task_reward{2.0};
  double r2_downscale_factor{4.0};
  int r2_downscale_iteration{1500};
};

struct RewardTerms {
  double r1{0.0};  // keypoint pose tracking
  double r2{0.0};  // EE reach target
  double r3{0.0};  // object velocity toward goal
  double r4{0.0};  // action-rate regularization
};

/// Evaluates the four reward terms for a single transition. In success mode
/// the task reward is pinned high, the reach term freezes at its pre-latch
/// value and the velocity term drops out.
RewardTerms reward_terms(const TransitionRecord& rec, const EpisodeSpec& spec,
                         const RewardConfig& cfg, bool success_latched);

/// Weighted sum; the reach weight is downscaled after the configured
/// iteration.
double total_reward(const RewardTerms& t, const RewardConfig& cfg, int iteration);

inline double effective_w2(const RewardConfig& cfg, int iteration) {
  return iteration > cfg.r2_downscale_iteration ? cfg.w2 / cfg.r2_downscale_factor : cfg.w2;
}

}  // namespace pushrl
