#include "pushrl/rollout.hpp"

#include <cmath>

namespace pushrl {

void RolloutBuffer::resize(int horizon_steps, int envs) {
  horizon = horizon_steps;
  num_envs = envs;
  const int n = horizon * num_envs;
  actor_obs.setZero(n, kActorObsDim);
  critic_obs.setZero(n, kCriticObsDim);
  actions.setZero(n, kActionDim);
  log_probs.setZero(n);
  rewards.setZero(n);
  values.setZero(n);
  deltas.setZero(n);
  done.assign(n, 0);
  timeout.assign(n, 0);
  terminal_values.setZero(n);
  bootstrap_values.setZero(num_envs);
  advantages.setZero(n);
  returns.setZero(n);
}

void gae_compute(RolloutBuffer& b, double gamma, double lambda) {
  for (int e = 0; e < b.num_envs; ++e) {
    double gae = 0.0;
    for (int t = b.horizon - 1; t >= 0; --t) {
      const int i = b.index(t, e);
      const bool is_done = b.done[i] != 0;
      const double cont = is_done ? 0.0 : 1.0 - b.deltas[i];
      double next_value;
      if (is_done) {
        next_value = b.timeout[i] != 0 ? b.terminal_values[i] : 0.0;
      } else {
        next_value = (t + 1 < b.horizon) ? b.values[b.index(t + 1, e)] : b.bootstrap_values[e];
      }
      // On termination the bootstrap (if any) enters undamped; otherwise the
      // continuation factor damps both the bootstrap and the GAE recursion.
      const double carried = is_done ? next_value : cont * next_value;
      const double td = b.rewards[i] + gamma * carried - b.values[i];
      gae = td + gamma * lambda * cont * gae;
      b.advantages[i] = gae;
      b.returns[i] = gae + b.values[i];
    }
  }
}

std::pair<double, double> normalize_advantages(VecX& adv) {
  const double n = static_cast<double>(adv.size());
  const double mean = adv.mean();
  const double var = (adv.array() - mean).square().sum() / n;
  const double std = std::sqrt(var);
  const double denom = std > 1e-12 ? std : 1e-12;
  adv = (adv.array() - mean) / denom;
  return {mean, std};
}

}  // namespace pushrl
