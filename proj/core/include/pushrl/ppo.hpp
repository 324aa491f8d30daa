#pragma once

#include "pushrl/policy.hpp"
#include "pushrl/rollout.hpp"

namespace pushrl {

struct PpoConfig {
  double gamma{0.99};
  double lambda{0.95};
  double clip_eps{0.2};
  int epochs{5};
  int minibatches{4};
  double learning_rate{3e-4};
  double lr_final{3e-5};
  double entropy_coef{0.005};
  double value_coef{1.0};
  double max_grad_norm{1.0};
  int horizon{48};
  int num_envs{256};
  int iterations{2000};
  std::vector<int> actor_hidden{256, 128, 64};
  std::vector<int> critic_hidden{256, 128, 64};
  double init_log_std{0.0};
  int checkpoint_every{500};

  /// Linear decay from learning_rate to lr_final over the run.
  double lr_at(int iteration) const {
    if (iterations <= 1) return learning_rate;
    const double f = clamp(static_cast<double>(iteration) / (iterations - 1), 0.0, 1.0);
    return learning_rate + f * (lr_final - learning_rate);
  }
};

struct UpdateStats {
  double policy_loss{0.0};
  double value_loss{0.0};
  double entropy{0.0};
  double approx_kl{0.0};
  double clip_fraction{0.0};
  double grad_norm_actor{0.0};
  double grad_norm_critic{0.0};
  double adv_mean_raw{0.0};
  double adv_std_raw{0.0};
  bool aborted{false};
};

/// Clipped-surrogate PPO epoch loop over shuffled minibatches. Advantages
/// are normalized over the whole buffer before the first epoch. Gradients
/// are accumulated over fixed-size row chunks so results do not depend on
/// the number of worker threads.
UpdateStats ppo_update(RolloutBuffer& buffer, GaussianActor& actor, Mlp& critic,
                       AdamState& actor_adam, AdamState& critic_adam, const PpoConfig& cfg,
                       double lr, Rng& rng);

/// Batched critic evaluation (values for rollout rows, bootstrap rows, ...).
VecX critic_values(const Mlp& critic, const MatX& obs);

}  // namespace pushrl
