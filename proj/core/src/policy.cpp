#include "pushrl/policy.hpp"

#include <cmath>

namespace pushrl {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2*pi)
}

GaussianActor::GaussianActor(std::vector<int> hidden, double init_log_std)
    : net_(MlpSpec{kActorObsDim, 2 * kActionDim, std::move(hidden), "elu"}) {
  const int last = net_.layer_count() - 1;
  net_.bias(last).tail(kActionDim).setConstant(init_log_std);
  // Flat indices of the log-std weight rows (kept at zero).
  const int rows = 2 * kActionDim;
  const int cols = net_.weight(last).cols();
  const auto base = static_cast<int>(net_.weight(last).data() - net_.params().data());
  for (int c = 0; c < cols; ++c)
    for (int r = kActionDim; r < rows; ++r) frozen_weight_indices_.push_back(base + c * rows + r);
}

void GaussianActor::init_params(Rng& rng) {
  const VecX saved_log_std = net_.bias(net_.layer_count() - 1).tail(kActionDim);
  net_.init_params(rng, 0.01);
  const int last = net_.layer_count() - 1;
  net_.bias(last).tail(kActionDim) = saved_log_std;
  for (int idx : frozen_weight_indices_) net_.params()[idx] = 0.0;
}

void GaussianActor::forward(const MatX& obs, MatX* means, VecX* log_std, Mlp::Cache* cache) const {
  const MatX out = net_.forward(obs, cache);
  if (means) *means = out.leftCols(kActionDim);
  if (log_std) {
    *log_std = net_.bias(net_.layer_count() - 1).tail(kActionDim);
    *log_std = log_std->cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  }
}

void GaussianActor::mask_grad(VecX& grad) const {
  for (int idx : frozen_weight_indices_) grad[idx] = 0.0;
}

void GaussianActor::clamp_log_std() {
  auto b = net_.bias(net_.layer_count() - 1);
  for (int i = 0; i < kActionDim; ++i) {
    b[kActionDim + i] = clamp(b[kActionDim + i], kLogStdMin, kLogStdMax);
  }
}

VecX GaussianActor::log_std() const {
  VecX v = net_.bias(net_.layer_count() - 1).tail(kActionDim);
  return v.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
}

GaussianSample gaussian_sample(const VecX& mean, const VecX& log_std, Rng& rng) {
  GaussianSample s;
  const int n = static_cast<int>(mean.size());
  VecX noise(n);
  for (int i = 0; i < n; ++i) noise[i] = rng.normal();
  const VecX sigma = log_std.array().exp();
  s.action = mean + sigma.cwiseProduct(noise);
  s.log_prob = gaussian_log_prob(mean, log_std, s.action);
  return s;
}

double gaussian_log_prob(const VecX& mean, const VecX& log_std, const VecX& action) {
  const VecX sigma = log_std.array().exp();
  const VecX z = (action - mean).cwiseQuotient(sigma);
  return -0.5 * z.squaredNorm() - log_std.sum() -
         0.5 * kLog2Pi * static_cast<double>(mean.size());
}

double gaussian_entropy(const VecX& log_std) {
  return log_std.sum() + 0.5 * (1.0 + kLog2Pi) * static_cast<double>(log_std.size());
}

}  // namespace pushrl
