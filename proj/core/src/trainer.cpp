#include "pushrl/trainer.hpp"

#include <cmath>
#include <stdexcept>

namespace pushrl {

const std::vector<std::string>& metrics_csv_columns() {
  static const std::vector<std::string> cols = {
      "iteration",    "env_steps",   "mean_reward",  "mean_r1",       "mean_r2",
      "mean_r3",      "mean_r4",     "episodes_done", "success_rate", "topple_rate",
      "delta_mean",   "delta_max",   "policy_loss",  "value_loss",    "entropy",
      "approx_kl",    "clip_fraction", "grad_norm_actor", "grad_norm_critic", "lr"};
  return cols;
}

std::vector<double> metrics_csv_row(const IterationMetrics& m) {
  return {static_cast<double>(m.iteration),
          static_cast<double>(m.env_steps),
          m.mean_reward,
          m.mean_r1,
          m.mean_r2,
          m.mean_r3,
          m.mean_r4,
          static_cast<double>(m.episodes_done),
          m.success_rate,
          m.topple_rate,
          m.delta_mean,
          m.delta_max,
          m.update.policy_loss,
          m.update.value_loss,
          m.update.entropy,
          m.update.approx_kl,
          m.update.clip_fraction,
          m.update.grad_norm_actor,
          m.update.grad_norm_critic,
          m.lr};
}

Trainer::Trainer(RunConfig cfg)
    : cfg_(std::move(cfg)),
      limits_(cfg_.constraints.build_limits(cfg_.env)),
      constraint_table_(cfg_.constraints.build_table()),
      actor_(cfg_.ppo.actor_hidden, cfg_.ppo.init_log_std),
      critic_(MlpSpec{kCriticObsDim, 1, cfg_.ppo.critic_hidden, "elu"}) {
  trainer_rng_ = Rng::derive(cfg_.seed, 0x7261696E65722ULL);
  Rng actor_rng = Rng::derive(cfg_.seed, 0xAC702ULL);
  Rng critic_rng = Rng::derive(cfg_.seed, 0xC21712CULL);
  actor_.init_params(actor_rng);
  critic_.init_params(critic_rng, 1.0);
  actor_adam_.reset(actor_.net().param_count());
  critic_adam_.reset(critic_.param_count());

  envs_.reserve(cfg_.ppo.num_envs);
  for (int e = 0; e < cfg_.ppo.num_envs; ++e) {
    envs_.emplace_back(cfg_.env, cfg_.world, arm_, cfg_.dr);
    envs_.back().reset(Rng::derive(cfg_.seed, 0x456E76ULL + static_cast<std::uint64_t>(e)));
  }
  buffer_.resize(cfg_.ppo.horizon, cfg_.ppo.num_envs);
}

void Trainer::resume(const Checkpoint& ckpt) {
  verify_spec_hashes(ckpt, actor_.net().spec(), critic_.spec());
  if (ckpt.actor_params.size() != actor_.net().param_count() ||
      ckpt.critic_params.size() != critic_.param_count())
    throw CheckpointError("checkpoint parameter count mismatch");
  actor_.net().params() = ckpt.actor_params;
  critic_.params() = ckpt.critic_params;
  if (ckpt.has_optimizer) {
    actor_adam_ = ckpt.actor_adam;
    critic_adam_ = ckpt.critic_adam;
    trainer_rng_.set_state(ckpt.trainer_rng_state);
  }
  iteration_ = static_cast<int>(ckpt.iteration);
}

Checkpoint Trainer::make_checkpoint() const {
  Checkpoint ckpt;
  ckpt.iteration = static_cast<std::uint64_t>(iteration_);
  ckpt.actor_spec_hash = actor_.net().spec().hash();
  ckpt.critic_spec_hash = critic_.spec().hash();
  ckpt.seed = cfg_.seed;
  ckpt.config_hash = config_hash(cfg_);
  ckpt.actor_params = actor_.net().params();
  ckpt.critic_params = critic_.params();
  ckpt.has_optimizer = true;
  ckpt.actor_adam = actor_adam_;
  ckpt.critic_adam = critic_adam_;
  ckpt.trainer_rng_state = trainer_rng_.state();
  return ckpt;
}

void Trainer::collect_rollout(IterationMetrics& metrics) {
  const int n_envs = cfg_.ppo.num_envs;
  const int horizon = cfg_.ppo.horizon;
  const double dt = cfg_.world.dt;
  terminal_rows_.assign(buffer_.size(), -1);
  std::vector<CriticObs> terminal_obs_list;

  MatX term_scratch(buffer_.size(), 4);  // r1..r4 per step, reduced serially
  int episodes = 0, successes = 0, topples = 0;

  MatX means;
  VecX log_std;
  std::vector<Action> actions(n_envs);

  for (int t = 0; t < horizon; ++t) {
#pragma omp parallel for schedule(static)
    for (int e = 0; e < n_envs; ++e) {
      const int i = buffer_.index(t, e);
      buffer_.actor_obs.row(i) = envs_[e].actor_obs(true).transpose();
      buffer_.critic_obs.row(i) = envs_[e].critic_obs().transpose();
    }

    actor_.forward(buffer_.actor_obs.middleRows(t * n_envs, n_envs), &means, &log_std);
    for (int e = 0; e < n_envs; ++e) {
      const GaussianSample s = gaussian_sample(means.row(e).transpose(), log_std, trainer_rng_);
      actions[e] = s.action;
      const int i = buffer_.index(t, e);
      buffer_.actions.row(i) = s.action.transpose();
      buffer_.log_probs[i] = s.log_prob;
    }

#pragma omp parallel for schedule(static)
    for (int e = 0; e < n_envs; ++e) {
      const int i = buffer_.index(t, e);
      PushEnv& env = envs_[e];
      const TransitionRecord rec = env.step(actions[e]);
      if (rec.fault) throw std::runtime_error("step_world produced non-finite state");
      const RewardTerms terms = reward_terms(rec, env.spec(), cfg_.rewards, rec.success_latched);
      buffer_.rewards[i] = total_reward(terms, cfg_.rewards, iteration_);
      const ConstraintReport report =
          constraint_values(rec, env.spec(), limits_, env.arm_model(), dt);
      buffer_.deltas[i] = cat_termination(report, constraint_table_, iteration_);
      buffer_.done[i] = rec.termination != TerminationKind::kRunning ? 1 : 0;
      buffer_.timeout[i] = rec.termination == TerminationKind::kTimeout ? 1 : 0;
      term_scratch(i, 0) = terms.r1;
      term_scratch(i, 1) = terms.r2;
      term_scratch(i, 2) = terms.r3;
      term_scratch(i, 3) = terms.r4;
    }

    for (int e = 0; e < n_envs; ++e) {
      const int i = buffer_.index(t, e);
      if (!buffer_.done[i]) continue;
      PushEnv& env = envs_[e];
      ++episodes;
      const bool toppled = env.state().object.toppled;
      if (toppled) {
        ++topples;
      } else if (env.state().success_latched) {
        ++successes;
      }
      if (buffer_.timeout[i]) {
        terminal_rows_[i] = static_cast<int>(terminal_obs_list.size());
        terminal_obs_list.push_back(env.critic_obs());
      }
      env.reset(env.state().rng);
    }
  }

  // Values for every stored state, the timeout terminal states and the
  // horizon-end bootstrap states, evaluated with the frozen critic.
  buffer_.values = critic_values(critic_, buffer_.critic_obs);
  if (!terminal_obs_list.empty()) {
    MatX term_obs(static_cast<int>(terminal_obs_list.size()), kCriticObsDim);
    for (int r = 0; r < term_obs.rows(); ++r) term_obs.row(r) = terminal_obs_list[r].transpose();
    const VecX term_values = critic_values(critic_, term_obs);
    for (int i = 0; i < buffer_.size(); ++i) {
      if (terminal_rows_[i] >= 0) buffer_.terminal_values[i] = term_values[terminal_rows_[i]];
    }
  }
  MatX boot_obs(n_envs, kCriticObsDim);
  for (int e = 0; e < n_envs; ++e) boot_obs.row(e) = envs_[e].critic_obs().transpose();
  buffer_.bootstrap_values = critic_values(critic_, boot_obs);

  const double steps = static_cast<double>(buffer_.size());
  metrics.env_steps = buffer_.size();
  metrics.mean_reward = buffer_.rewards.sum() / steps;
  metrics.mean_r1 = term_scratch.col(0).sum() / steps;
  metrics.mean_r2 = term_scratch.col(1).sum() / steps;
  metrics.mean_r3 = term_scratch.col(2).sum() / steps;
  metrics.mean_r4 = term_scratch.col(3).sum() / steps;
  metrics.episodes_done = episodes;
  metrics.success_rate = episodes > 0 ? static_cast<double>(successes) / episodes : 0.0;
  metrics.topple_rate = episodes > 0 ? static_cast<double>(topples) / episodes : 0.0;
  metrics.delta_mean = buffer_.deltas.sum() / steps;
  metrics.delta_max = buffer_.deltas.maxCoeff();
}

IterationMetrics Trainer::run_iteration() {
  IterationMetrics metrics;
  metrics.iteration = iteration_;
  metrics.lr = cfg_.ppo.lr_at(iteration_);

  collect_rollout(metrics);
  gae_compute(buffer_, cfg_.ppo.gamma, cfg_.ppo.lambda);
  metrics.update =
      ppo_update(buffer_, actor_, critic_, actor_adam_, critic_adam_, cfg_.ppo, metrics.lr,
                 trainer_rng_);
  if (metrics.update.aborted)
    throw std::runtime_error("ppo_update aborted: non-finite loss at iteration " +
                             std::to_string(iteration_));
  iteration_ += 1;
  return metrics;
}

void Trainer::run(const MetricsSink& on_metrics, const CheckpointSink& on_checkpoint) {
  while (iteration_ < cfg_.ppo.iterations) {
    const IterationMetrics m = run_iteration();
    if (on_metrics) on_metrics(m);
    const bool final = iteration_ >= cfg_.ppo.iterations;
    if (on_checkpoint &&
        (final || (cfg_.ppo.checkpoint_every > 0 && iteration_ % cfg_.ppo.checkpoint_every == 0))) {
      on_checkpoint(make_checkpoint(), final);
    }
  }
}

}  // namespace pushrl
