#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pushrl/rng.hpp"
#include "pushrl/types.hpp"

namespace pushrl {

struct MlpSpec {
  int input_dim{0};
  int output_dim{0};
  std::vector<int> hidden;
  std::string activation{"elu"};

  std::vector<int> layer_dims() const;
  std::uint64_t hash() const;
};

/// Plain fully-connected network over a single flat parameter vector.
/// Layer l maps x -> act(x W_l^T + b_l); the output layer is linear.
/// Parameters are laid out layer by layer, weights (column-major, out x in)
/// then biases, so checkpoints are byte-stable.
class Mlp {
 public:
  explicit Mlp(MlpSpec spec);

  const MlpSpec& spec() const { return spec_; }
  int param_count() const { return static_cast<int>(params_.size()); }
  VecX& params() { return params_; }
  const VecX& params() const { return params_; }

  int layer_count() const { return static_cast<int>(in_dims_.size()); }
  Eigen::Map<MatX> weight(int layer);
  Eigen::Map<const MatX> weight(int layer) const;
  Eigen::Map<VecX> bias(int layer);
  Eigen::Map<const VecX> bias(int layer) const;

  /// Orthogonal initialization, sqrt(2) gain on hidden layers and
  /// output_gain on the final layer.
  void init_params(Rng& rng, double output_gain = 1.0);

  struct Cache {
    MatX input;
    std::vector<MatX> pre;   // pre-activation per layer
    std::vector<MatX> post;  // activation output per layer (last = output)
  };

  /// Rows are batch samples. Pass a cache to enable backward().
  MatX forward(const MatX& x, Cache* cache = nullptr) const;

  /// Exact reverse-mode gradient for d(loss)/d(params) given d(loss)/d(output).
  /// Optionally also returns d(loss)/d(input).
  VecX backward(const Cache& cache, const MatX& d_output, MatX* d_input = nullptr) const;

 private:
  double act(double x) const;
  double act_grad(double pre) const;

  MlpSpec spec_;
  std::vector<int> in_dims_, out_dims_;
  std::vector<int> w_offsets_, b_offsets_;
  VecX params_;
};

/// Adam with bias correction. Moment vectors match the flat parameter layout.
struct AdamState {
  VecX m, v;
  long t{0};

  void reset(int n) {
    m = VecX::Zero(n);
    v = VecX::Zero(n);
    t = 0;
  }
};

void adam_step(VecX& params, const VecX& grad, AdamState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

/// Scales grad in place so its l2 norm does not exceed max_norm; returns the
/// pre-clip norm.
double clip_grad_norm(VecX& grad, double max_norm);

}  // namespace pushrl
