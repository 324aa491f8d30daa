#include "pushrl/net.hpp"

#include <cmath>
#include <stdexcept>

namespace pushrl {

std::vector<int> MlpSpec::layer_dims() const {
  std::vector<int> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(output_dim);
  return dims;
}

std::uint64_t MlpSpec::hash() const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(input_dim));
  mix(static_cast<std::uint64_t>(output_dim));
  for (int w : hidden) mix(static_cast<std::uint64_t>(w));
  for (char c : activation) mix(static_cast<std::uint64_t>(c));
  return h;
}

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  if (spec_.activation != "elu" && spec_.activation != "tanh" && spec_.activation != "relu")
    throw std::invalid_argument("Mlp: unsupported activation " + spec_.activation);
  const auto dims = spec_.layer_dims();
  int offset = 0;
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    in_dims_.push_back(dims[l]);
    out_dims_.push_back(dims[l + 1]);
    w_offsets_.push_back(offset);
    offset += dims[l] * dims[l + 1];
    b_offsets_.push_back(offset);
    offset += dims[l + 1];
  }
  params_ = VecX::Zero(offset);
}

Eigen::Map<MatX> Mlp::weight(int layer) {
  return {params_.data() + w_offsets_[layer], out_dims_[layer], in_dims_[layer]};
}
Eigen::Map<const MatX> Mlp::weight(int layer) const {
  return {params_.data() + w_offsets_[layer], out_dims_[layer], in_dims_[layer]};
}
Eigen::Map<VecX> Mlp::bias(int layer) {
  return {params_.data() + b_offsets_[layer], out_dims_[layer]};
}
Eigen::Map<const VecX> Mlp::bias(int layer) const {
  return {params_.data() + b_offsets_[layer], out_dims_[layer]};
}

void Mlp::init_params(Rng& rng, double output_gain) {
  for (int l = 0; l < layer_count(); ++l) {
    const int rows = out_dims_[l], cols = in_dims_[l];
    MatX a(std::max(rows, cols), std::min(rows, cols));
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) a(i, j) = rng.normal();
    Eigen::HouseholderQR<MatX> qr(a);
    MatX q = qr.householderQ() * MatX::Identity(a.rows(), a.cols());
    // Fix the sign convention so the factorization is unique.
    const MatX r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
    for (int j = 0; j < a.cols(); ++j)
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    const double gain = (l + 1 == layer_count()) ? output_gain : std::sqrt(2.0);
    MatX w = (rows >= cols) ? q : MatX(q.transpose());
    weight(l) = gain * w;
    bias(l).setZero();
  }
}

double Mlp::act(double x) const {
  if (spec_.activation == "elu") return x > 0.0 ? x : std::expm1(x);
  if (spec_.activation == "tanh") return std::tanh(x);
  return x > 0.0 ? x : 0.0;  // relu
}

double Mlp::act_grad(double pre) const {
  if (spec_.activation == "elu") return pre > 0.0 ? 1.0 : std::exp(pre);
  if (spec_.activation == "tanh") {
    const double t = std::tanh(pre);
    return 1.0 - t * t;
  }
  return pre > 0.0 ? 1.0 : 0.0;
}

MatX Mlp::forward(const MatX& x, Cache* cache) const {
  if (x.cols() != spec_.input_dim)
    throw std::invalid_argument("Mlp::forward: input width mismatch");
  if (cache) {
    cache->input = x;
    cache->pre.assign(layer_count(), MatX());
    cache->post.assign(layer_count(), MatX());
  }
  MatX h = x;
  for (int l = 0; l < layer_count(); ++l) {
    MatX pre = h * weight(l).transpose();
    pre.rowwise() += bias(l).transpose();
    const bool last = (l + 1 == layer_count());
    MatX post;
    if (last) {
      post = pre;
    } else {
      post = pre.unaryExpr([this](double v) { return act(v); });
    }
    if (cache) {
      cache->pre[l] = std::move(pre);
      cache->post[l] = post;
    }
    h = std::move(post);
  }
  return h;
}

VecX Mlp::backward(const Cache& cache, const MatX& d_output, MatX* d_input) const {
  VecX grad = VecX::Zero(param_count());
  MatX delta = d_output;  // d(loss)/d(pre) of the linear output layer
  for (int l = layer_count() - 1; l >= 0; --l) {
    if (l + 1 < layer_count()) {
      // Through the activation of layer l.
      delta = delta.cwiseProduct(cache.pre[l].unaryExpr([this](double v) { return act_grad(v); }));
    }
    const MatX& in = (l == 0) ? cache.input : cache.post[l - 1];
    Eigen::Map<MatX>(grad.data() + w_offsets_[l], out_dims_[l], in_dims_[l]) = delta.transpose() * in;
    Eigen::Map<VecX>(grad.data() + b_offsets_[l], out_dims_[l]) = delta.colwise().sum();
    if (l > 0 || d_input) {
      MatX prev = delta * weight(l);
      if (l == 0) {
        if (d_input) *d_input = std::move(prev);
      } else {
        delta = std::move(prev);
      }
    }
  }
  return grad;
}

void adam_step(VecX& params, const VecX& grad, AdamState& state, double lr, double beta1,
               double beta2, double eps) {
  state.t += 1;
  state.m = beta1 * state.m + (1.0 - beta1) * grad;
  state.v = beta2 * state.v + (1.0 - beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  const double step = lr / bc1;
  params.array() -=
      step * state.m.array() / ((state.v.array() / bc2).sqrt() + eps);
}

double clip_grad_norm(VecX& grad, double max_norm) {
  const double norm = grad.norm();
  if (max_norm > 0.0 && norm > max_norm) grad *= max_norm / norm;
  return norm;
}

}  // namespace pushrl
