#pragma once

#include <cstdint>
#include <vector>

#include "pushrl/observations.hpp"

namespace pushrl {

/// Fixed-horizon storage for T steps of N environments, flattened
/// time-major: index(t, env) = t * num_envs + env.
struct RolloutBuffer {
  int horizon{0};
  int num_envs{0};

  MatX actor_obs;    // (T N) x 54
  MatX critic_obs;   // (T N) x 73
  MatX actions;      // (T N) x 11
  VecX log_probs;
  VecX rewards;
  VecX values;
  VecX deltas;       // constraint-termination probability per step
  std::vector<std::uint8_t> done;     // episode ended at this step
  std::vector<std::uint8_t> timeout;  // ended by timeout (bootstraps)
  VecX terminal_values;               // V of the pre-reset terminal state
  VecX bootstrap_values;              // per env, V(s_T) at the horizon end
  VecX advantages;
  VecX returns;

  void resize(int horizon_steps, int envs);
  int size() const { return horizon * num_envs; }
  int index(int t, int env) const { return t * num_envs + env; }
};

/// Generalized advantage estimation with the continuation factor
/// (1 - done) * (1 - delta), so constraint violations probabilistically
/// truncate future returns. Timeout terminations bootstrap from the critic
/// value of the terminal state; other terminations do not.
void gae_compute(RolloutBuffer& buffer, double gamma, double lambda);

/// In-place normalization to zero mean and unit (population) standard
/// deviation. Returns {mean, std} before normalization.
std::pair<double, double> normalize_advantages(VecX& advantages);

}  // namespace pushrl
