#pragma once

#include "pushrl/net.hpp"
#include "pushrl/observations.hpp"

namespace pushrl {

inline constexpr double kLogStdMin = -4.0;
inline constexpr double kLogStdMax = 1.0;

/// Diagonal-Gaussian actor. The network emits 2 * kActionDim values per
/// sample: means followed by log-stds. The log-std rows of the output layer
/// keep zero weights (bias only), so the standard deviation is
/// state-independent; the optimizer masks those weight gradients.
class GaussianActor {
 public:
  explicit GaussianActor(std::vector<int> hidden, double init_log_std = 0.0);

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

  void init_params(Rng& rng);

  /// Batched forward: rows are samples. means is batch x kActionDim,
  /// log_std is the state-independent kActionDim vector (clamped).
  void forward(const MatX& obs, MatX* means, VecX* log_std, Mlp::Cache* cache = nullptr) const;

  /// Zeroes gradient entries of the structurally-frozen log-std weight rows.
  void mask_grad(VecX& grad) const;

  /// Clamps the log-std bias into [kLogStdMin, kLogStdMax] after an update.
  void clamp_log_std();

  VecX log_std() const;

 private:
  Mlp net_;
  std::vector<int> frozen_weight_indices_;
};

struct GaussianSample {
  VecX action;
  double log_prob;
};

GaussianSample gaussian_sample(const VecX& mean, const VecX& log_std, Rng& rng);
double gaussian_log_prob(const VecX& mean, const VecX& log_std, const VecX& action);
double gaussian_entropy(const VecX& log_std);

}  // namespace pushrl
