#pragma once

#include <functional>
#include <string>

#include "pushrl/checkpoint.hpp"
#include "pushrl/config.hpp"

namespace pushrl {

struct IterationMetrics {
  int iteration{0};
  long env_steps{0};
  double mean_reward{0.0};
  double mean_r1{0.0}, mean_r2{0.0}, mean_r3{0.0}, mean_r4{0.0};
  int episodes_done{0};
  double success_rate{0.0};  // over episodes finished this iteration
  double topple_rate{0.0};
  double delta_mean{0.0};
  double delta_max{0.0};
  double lr{0.0};
  UpdateStats update;
};

const std::vector<std::string>& metrics_csv_columns();
std::vector<double> metrics_csv_row(const IterationMetrics& m);

/// Constrained-PPO training over a batch of environments. Deterministic for
/// a fixed seed and configuration.
class Trainer {
 public:
  explicit Trainer(RunConfig cfg);

  /// Restores parameters, optimizer state and iteration counter.
  void resume(const Checkpoint& ckpt);

  IterationMetrics run_iteration();

  /// Full loop: writes one metrics row per iteration via the callback and
  /// checkpoints through the sink. Returns the final iteration metrics.
  using MetricsSink = std::function<void(const IterationMetrics&)>;
  using CheckpointSink = std::function<void(const Checkpoint&, bool final)>;
  void run(const MetricsSink& on_metrics, const CheckpointSink& on_checkpoint);

  Checkpoint make_checkpoint() const;

  int iteration() const { return iteration_; }
  const GaussianActor& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const RunConfig& config() const { return cfg_; }

 private:
  void collect_rollout(IterationMetrics& metrics);

  RunConfig cfg_;
  ConstraintLimits limits_;
  std::vector<ConstraintSpec> constraint_table_;
  ArmModel arm_;
  GaussianActor actor_;
  Mlp critic_;
  AdamState actor_adam_;
  AdamState critic_adam_;
  Rng trainer_rng_;
  std::vector<PushEnv> envs_;
  RolloutBuffer buffer_;
  std::vector<int> terminal_rows_;  // timeout terminal-value bookkeeping
  int iteration_{0};
};

}  // namespace pushrl
