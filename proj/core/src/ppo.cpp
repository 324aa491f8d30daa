#include "pushrl/ppo.hpp"

#include <cmath>
#include <numeric>

namespace pushrl {

namespace {

constexpr int kChunkRows = 512;  // fixed so the reduction order is stable

struct ChunkResult {
  VecX actor_grad;
  VecX critic_grad;
  double policy_loss{0.0};
  double value_loss{0.0};
  double kl_sum{0.0};
  int clipped{0};
  bool finite{true};
};

}  // namespace

VecX critic_values(const Mlp& critic, const MatX& obs) {
  const int n = static_cast<int>(obs.rows());
  VecX out(n);
  for (int start = 0; start < n; start += 4096) {
    const int rows = std::min(4096, n - start);
    out.segment(start, rows) = critic.forward(obs.middleRows(start, rows)).col(0);
  }
  return out;
}

UpdateStats ppo_update(RolloutBuffer& b, GaussianActor& actor, Mlp& critic,
                       AdamState& actor_adam, AdamState& critic_adam, const PpoConfig& cfg,
                       double lr, Rng& rng) {
  UpdateStats stats;
  const int total = b.size();
  const auto [adv_mean, adv_std] = normalize_advantages(b.advantages);
  stats.adv_mean_raw = adv_mean;
  stats.adv_std_raw = adv_std;

  std::vector<int> perm(total);
  std::iota(perm.begin(), perm.end(), 0);
  const int mb_count = std::max(1, cfg.minibatches);
  const int mb_size = total / mb_count;

  double policy_loss_sum = 0.0, value_loss_sum = 0.0, kl_sum = 0.0, grad_a_sum = 0.0, grad_c_sum = 0.0;
  long clipped = 0, samples = 0;
  int updates = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates driven by the trainer stream.
    for (int i = total - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[i], perm[j]);
    }

    for (int mb = 0; mb < mb_count; ++mb) {
      const int begin = mb * mb_size;
      const int count = (mb + 1 == mb_count) ? total - begin : mb_size;

      MatX obs_a(count, kActorObsDim), obs_c(count, kCriticObsDim), act(count, kActionDim);
      VecX logp_old(count), adv(count), ret(count);
      for (int i = 0; i < count; ++i) {
        const int src = perm[begin + i];
        obs_a.row(i) = b.actor_obs.row(src);
        obs_c.row(i) = b.critic_obs.row(src);
        act.row(i) = b.actions.row(src);
        logp_old[i] = b.log_probs[src];
        adv[i] = b.advantages[src];
        ret[i] = b.returns[src];
      }

      const VecX log_std = actor.log_std();
      const VecX sigma = log_std.array().exp();
      const VecX inv_var = sigma.array().square().inverse();
      const double entropy = gaussian_entropy(log_std);
      const double inv_count = 1.0 / static_cast<double>(count);

      const int chunks = (count + kChunkRows - 1) / kChunkRows;
      std::vector<ChunkResult> results(chunks);

#pragma omp parallel for schedule(static)
      for (int c = 0; c < chunks; ++c) {
        ChunkResult& res = results[c];
        const int row0 = c * kChunkRows;
        const int rows = std::min(kChunkRows, count - row0);

        Mlp::Cache cache_a, cache_c;
        MatX means;
        VecX ls_unused;
        actor.forward(obs_a.middleRows(row0, rows), &means, &ls_unused, &cache_a);
        const VecX v = critic.forward(obs_c.middleRows(row0, rows), &cache_c).col(0);

        MatX d_out = MatX::Zero(rows, 2 * kActionDim);
        MatX dv(rows, 1);
        for (int i = 0; i < rows; ++i) {
          const int gi = row0 + i;
          const VecX a = act.row(gi).transpose();
          const VecX mu = means.row(i).transpose();
          const VecX diff = a - mu;
          const VecX z2 = diff.cwiseProduct(diff).cwiseProduct(inv_var);
          const double logp = -0.5 * z2.sum() - log_std.sum() -
                              0.5 * 1.8378770664093454836 * kActionDim;
          const double ratio = std::exp(logp - logp_old[gi]);
          const double advantage = adv[gi];
          const double surr1 = ratio * advantage;
          const double surr2 = clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * advantage;
          res.policy_loss -= std::min(surr1, surr2);
          res.kl_sum += logp_old[gi] - logp;
          if (std::abs(ratio - 1.0) > cfg.clip_eps) ++res.clipped;

          double dlogp = 0.0;
          if (surr1 <= surr2) dlogp = -inv_count * ratio * advantage;  // unclipped branch active
          // d logp / d mu and d logp / d log_std.
          d_out.row(i).head(kActionDim) = dlogp * diff.cwiseProduct(inv_var).transpose();
          d_out.row(i).tail(kActionDim) =
              (dlogp * (z2.array() - 1.0) - cfg.entropy_coef * inv_count).transpose();

          const double verr = v[i] - ret[gi];
          res.value_loss += verr * verr;
          dv(i, 0) = cfg.value_coef * 2.0 * verr * inv_count;
          if (!std::isfinite(logp) || !std::isfinite(ratio)) res.finite = false;
        }
        res.actor_grad = actor.net().backward(cache_a, d_out);
        res.critic_grad = critic.backward(cache_c, dv);
      }

      VecX actor_grad = VecX::Zero(actor.net().param_count());
      VecX critic_grad = VecX::Zero(critic.param_count());
      double mb_policy_loss = 0.0, mb_value_loss = 0.0;
      bool finite = true;
      for (const ChunkResult& res : results) {
        actor_grad += res.actor_grad;
        critic_grad += res.critic_grad;
        mb_policy_loss += res.policy_loss;
        mb_value_loss += res.value_loss;
        kl_sum += res.kl_sum;
        clipped += res.clipped;
        finite = finite && res.finite;
      }
      mb_policy_loss *= inv_count;
      mb_value_loss *= inv_count;
      samples += count;

      if (!finite || !std::isfinite(mb_policy_loss) || !std::isfinite(mb_value_loss) ||
          !actor_grad.allFinite() || !critic_grad.allFinite()) {
        stats.aborted = true;
        return stats;
      }

      actor.mask_grad(actor_grad);
      grad_a_sum += clip_grad_norm(actor_grad, cfg.max_grad_norm);
      grad_c_sum += clip_grad_norm(critic_grad, cfg.max_grad_norm);
      adam_step(actor.net().params(), actor_grad, actor_adam, lr);
      adam_step(critic.params(), critic_grad, critic_adam, lr);
      actor.clamp_log_std();

      policy_loss_sum += mb_policy_loss;
      value_loss_sum += mb_value_loss;
      stats.entropy = gaussian_entropy(actor.log_std());
      ++updates;
    }
  }

  if (updates > 0) {
    stats.policy_loss = policy_loss_sum / updates;
    stats.value_loss = value_loss_sum / updates;
    stats.grad_norm_actor = grad_a_sum / updates;
    stats.grad_norm_critic = grad_c_sum / updates;
  }
  if (samples > 0) {
    stats.approx_kl = kl_sum / static_cast<double>(samples);
    stats.clip_fraction = static_cast<double>(clipped) / static_cast<double>(samples);
  }
  return stats;
}

}  // namespace pushrl
